#pragma once

// Time-independent ponderomotive models in a truncated plane-wave basis.
//
// The relativistic Pauli equation with the cycle-averaged ponderomotive and
// spin-coupling terms becomes, in the basis exp(i n k x) chi^gamma, a real
// symmetric system i dc/dt = M c that couples mode n to n +- 2. All
// frequencies are angular frequencies in atomic units. The diagonal constant
// 2 Omega2 is a global phase and is never included.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "kapitza/constants.hpp"
#include "kapitza/errors.hpp"
#include "kapitza/fields.hpp"

namespace kapitza {

/// Squared-amplitude ratio Omega2 / Omega1 above which the Bragg-regime
/// diagnostic is raised.
inline constexpr double bragg_ratio_threshold = 0.1;

/// Occupations below this make a conditioned spin undefined (reported NaN).
inline constexpr double occupation_threshold = 1e-12;

template <typename Scalar>
struct Frequencies {
    Scalar omega1{};   ///< k^2 hbar / (2 m), recoil frequency
    Scalar omega2{};   ///< q^2 E^2 / (2 hbar k^2 m c^2), ponderomotive coupling
    Scalar omega3{};   ///< q^2 E^2 / (2 k m^2 c^3), spin coupling at circular polarization
    Scalar omega2p{};  ///< omega2 cos(eta)
    Scalar omega3p{};  ///< omega3 sin(eta)
    Scalar k{};
    Scalar omega{};
    bool bragg_warning = false;
};

using FrequencySet = Frequencies<double>;

template <typename Scalar = double>
Frequencies<Scalar> frequencies(const LaserConfig& cfg,
                                const BasicPhysicalConstants<Scalar>& u = {}) {
    cfg.validate();
    using std::cos;
    using std::sin;
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    const Scalar k = two_pi / Scalar(cfg.lambda);
    const Scalar e2 = Scalar(cfg.e_hat) * Scalar(cfg.e_hat);
    const Scalar q2 = u.q * u.q;
    const Scalar eta = Scalar(cfg.eta);

    Frequencies<Scalar> f;
    f.k = k;
    f.omega = u.c * k;
    f.omega1 = k * k * u.hbar / (Scalar(2) * u.m);
    f.omega2 = q2 * e2 / (Scalar(2) * u.hbar * k * k * u.m * u.c * u.c);
    f.omega3 = q2 * e2 / (Scalar(2) * k * u.m * u.m * u.c * u.c * u.c);
    f.omega2p = f.omega2 * cos(eta);
    f.omega3p = f.omega3 * sin(eta);
    f.bragg_warning = f.omega2 >= Scalar(bragg_ratio_threshold) * f.omega1;
    return f;
}

/// Frequencies set directly, for parameter studies that bypass a laser.
template <typename Scalar>
Frequencies<Scalar> make_frequencies(Scalar omega1, Scalar omega2, Scalar omega3, Scalar eta) {
    using std::cos;
    using std::sin;
    Frequencies<Scalar> f;
    f.omega1 = omega1;
    f.omega2 = omega2;
    f.omega3 = omega3;
    f.omega2p = omega2 * cos(eta);
    f.omega3p = omega3 * sin(eta);
    f.bragg_warning = f.omega2 >= Scalar(bragg_ratio_threshold) * f.omega1;
    return f;
}

enum class Spin { Up, Down };

/// Modes n_min, n_min + 2, ..., n_max, each carrying spin up and down.
/// Amplitudes are stored as (n, up), (n, down) pairs in increasing n.
struct ModeWindow {
    int n_min = -3;
    int n_max = 3;

    int mode_count() const { return (n_max - n_min) / 2 + 1; }
    int size() const { return 2 * mode_count(); }
    bool contains(int n) const {
        return n >= n_min && n <= n_max && (n - n_min) % 2 == 0;
    }
    int index(int n, Spin s) const {
        if (!contains(n)) throw std::out_of_range("mode " + std::to_string(n) + " not in window");
        return 2 * ((n - n_min) / 2) + (s == Spin::Down ? 1 : 0);
    }
    int mode_at(int index) const { return n_min + 2 * (index / 2); }

    /// {-n_max, ..., n_max} for odd n_max, the resonant Bragg window.
    static ModeWindow odd(int n_max = 3) {
        if (n_max < 1 || n_max % 2 == 0) throw ParameterError("odd window needs odd n_max >= 1");
        return {-n_max, n_max};
    }
    /// {-n_max, ..., n_max} for even n_max, the nonresonant window.
    static ModeWindow even(int n_max = 2) {
        if (n_max < 0 || n_max % 2 != 0) throw ParameterError("even window needs even n_max >= 0");
        return {-n_max, n_max};
    }
};

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Coefficient matrix of the truncated momentum-space system for either
/// setup on an arbitrary window. Modes n and n +- 2 couple with Omega2
/// (spin preserving) and Omega3' (spin flip) in the corotating setup and
/// with Omega2' (spin preserving only) in the antirotating setup.
template <typename Scalar>
DenseMatrix<Scalar> coupled_mode_matrix(const Frequencies<Scalar>& f, Setup setup,
                                        const ModeWindow& w) {
    const int n = w.size();
    DenseMatrix<Scalar> m = DenseMatrix<Scalar>::Zero(n, n);
    const Scalar keep = setup == Setup::Corotating ? f.omega2 : f.omega2p;
    const Scalar flip = setup == Setup::Corotating ? f.omega3p : Scalar(0);
    for (int mode = w.n_min; mode <= w.n_max; mode += 2) {
        const int i = w.index(mode, Spin::Up);
        m(i, i) = m(i + 1, i + 1) = Scalar(mode * mode) * f.omega1;
        if (mode + 2 > w.n_max) continue;
        const int j = w.index(mode + 2, Spin::Up);
        m(i, j) = m(j, i) = m(i + 1, j + 1) = m(j + 1, i + 1) = keep;
        m(i, j + 1) = m(j + 1, i) = m(i + 1, j) = m(j, i + 1) = flip;
    }
    return m;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 8, 8> build_corotating_matrix(const Frequencies<Scalar>& f) {
    return coupled_mode_matrix(f, Setup::Corotating, ModeWindow::odd(3));
}

template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> build_antirotating_matrix(const Frequencies<Scalar>& f) {
    return coupled_mode_matrix(f, Setup::Antirotating, ModeWindow::odd(1));
}

template <typename Scalar>
Eigen::Matrix<Scalar, 6, 6> build_nonresonant_matrix(const Frequencies<Scalar>& f) {
    return coupled_mode_matrix(f, Setup::Corotating, ModeWindow::even(2));
}

/// Closed-form eigenvalues of the 8x8 corotating system, ordered
/// eps_1 ... eps_8 where eps_{j} and eps_{j+4} share the coupling
/// s_j in {O2 + O3', -O2 + O3', O2 - O3', -O2 - O3'}.
template <typename Scalar>
Eigen::Matrix<Scalar, 8, 1> corotating_eigenvalues(const Frequencies<Scalar>& f) {
    using std::sqrt;
    const Scalar o1 = f.omega1;
    const Scalar s[4] = {f.omega2 + f.omega3p, -f.omega2 + f.omega3p, f.omega2 - f.omega3p,
                         -f.omega2 - f.omega3p};
    Eigen::Matrix<Scalar, 8, 1> eps;
    for (int j = 0; j < 4; ++j) {
        const Scalar d = Scalar(8) * o1 - s[j];
        const Scalar root = sqrt(d * d / Scalar(4) + s[j] * s[j]);
        eps[j] = Scalar(5) * o1 + s[j] / Scalar(2) - root;
        eps[j + 4] = Scalar(5) * o1 + s[j] / Scalar(2) + root;
    }
    return eps;
}

/// Omega1 -+ Omega2', each twice (one pair per spin sector).
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 1> antirotating_eigenvalues(const Frequencies<Scalar>& f) {
    Eigen::Matrix<Scalar, 4, 1> eps;
    eps << f.omega1 - f.omega2p, f.omega1 - f.omega2p, f.omega1 + f.omega2p,
        f.omega1 + f.omega2p;
    return eps;
}

/// eps_{1,2} = 2 O1 - sqrt(4 O1^2 + 2 (O2 +- O3')^2), eps_{3,4} = 4 O1,
/// eps_{5,6} = 2 O1 + sqrt(...).
template <typename Scalar>
Eigen::Matrix<Scalar, 6, 1> nonresonant_eigenvalues(const Frequencies<Scalar>& f) {
    using std::sqrt;
    const Scalar o1 = f.omega1;
    const Scalar plus = f.omega2 + f.omega3p;
    const Scalar minus = f.omega2 - f.omega3p;
    const Scalar rp = sqrt(Scalar(4) * o1 * o1 + Scalar(2) * plus * plus);
    const Scalar rm = sqrt(Scalar(4) * o1 * o1 + Scalar(2) * minus * minus);
    Eigen::Matrix<Scalar, 6, 1> eps;
    eps << Scalar(2) * o1 - rp, Scalar(2) * o1 - rm, Scalar(4) * o1, Scalar(4) * o1,
        Scalar(2) * o1 + rp, Scalar(2) * o1 + rm;
    return eps;
}

template <typename Scalar>
struct EigenSystem {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
    DenseMatrix<Scalar> vectors;
};

template <typename Derived>
EigenSystem<typename Derived::Scalar> eigensystem(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(m.eval());
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Complex coefficients c_n^gamma over a mode window at time t.
template <typename Scalar>
struct BasicModeAmplitudes {
    using Complex = std::complex<Scalar>;
    using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

    ModeWindow window;
    Vector c;
    Scalar t{};

    static BasicModeAmplitudes basis_state(const ModeWindow& w, int n, Spin s) {
        BasicModeAmplitudes a{w, Vector::Zero(w.size()), Scalar(0)};
        a.c[w.index(n, s)] = Complex(1);
        return a;
    }

    Complex amplitude(int n, Spin s) const {
        return window.contains(n) ? c[window.index(n, s)] : Complex(0);
    }
    Scalar probability(int n, Spin s) const { return std::norm(amplitude(n, s)); }
    Scalar norm_squared() const { return c.squaredNorm(); }
};

using ModeAmplitudes = BasicModeAmplitudes<double>;

/// exp(-i M t) for a fixed Hermitian coefficient matrix, diagonalized once.
template <typename Scalar>
class ModePropagator {
public:
    using Complex = std::complex<Scalar>;
    using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

    template <typename Derived>
    explicit ModePropagator(const Eigen::MatrixBase<Derived>& matrix) {
        const DenseMatrix<Scalar> m = matrix.template cast<Scalar>();
        if (m.rows() != m.cols()) throw std::invalid_argument("ModePropagator: matrix is not square");
        const Scalar scale = std::max(Scalar(1), Scalar(m.cwiseAbs().maxCoeff()));
        if (Scalar((m - m.adjoint()).cwiseAbs().maxCoeff()) > Scalar(1e-12) * scale)
            throw std::invalid_argument("ModePropagator: coefficient matrix is not Hermitian");
        const auto es = eigensystem(m);
        values_ = es.values;
        vectors_ = es.vectors.template cast<Complex>();
    }

    BasicModeAmplitudes<Scalar> evolve(const BasicModeAmplitudes<Scalar>& initial, Scalar t) const {
        using std::abs;
        if (initial.c.size() != vectors_.rows())
            throw std::invalid_argument("ModePropagator: amplitudes do not match the mode window");
        if (abs(initial.norm_squared() - Scalar(1)) > Scalar(1e-10))
            throw std::invalid_argument("ModePropagator: initial amplitudes are not normalized");
        Eigen::Matrix<Complex, Eigen::Dynamic, 1> w = vectors_.adjoint() * initial.c;
        for (Eigen::Index i = 0; i < w.size(); ++i) w[i] *= std::polar(Scalar(1), -values_[i] * t);
        return {initial.window, vectors_ * w, initial.t + t};
    }

    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& eigenvalues() const { return values_; }

private:
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values_;
    ComplexMatrix vectors_;
};

/// Exact propagation c(t) = exp(-i M t) c(0) through the spectral
/// decomposition of the Hermitian coefficient matrix.
template <typename Derived, typename Scalar>
BasicModeAmplitudes<Scalar> evolve_modes(const Eigen::MatrixBase<Derived>& matrix,
                                         const BasicModeAmplitudes<Scalar>& initial, Scalar t) {
    return ModePropagator<Scalar>(matrix).evolve(initial, t);
}

/// Closed-form corotating solution for c_{-1}^up(0) = 1 built from the exact
/// eigenvalues and the constant approximate eigenvectors; c_{+-3} vanish.
template <typename Scalar>
BasicModeAmplitudes<Scalar> analytic_amplitudes_corotating(const Frequencies<Scalar>& f,
                                                           Scalar t) {
    using Complex = std::complex<Scalar>;
    const auto eps = corotating_eigenvalues(f);
    Complex e[4];
    for (int j = 0; j < 4; ++j) e[j] = std::polar(Scalar(1), -eps[j] * t);
    const Scalar quarter(0.25);

    auto a = BasicModeAmplitudes<Scalar>::basis_state(ModeWindow::odd(3), -1, Spin::Up);
    const ModeWindow& w = a.window;
    a.c[w.index(-1, Spin::Up)] = quarter * (e[0] + e[1] + e[2] + e[3]);
    a.c[w.index(-1, Spin::Down)] = quarter * (e[0] - e[1] - e[2] + e[3]);
    a.c[w.index(1, Spin::Up)] = quarter * (e[0] - e[1] + e[2] - e[3]);
    a.c[w.index(1, Spin::Down)] = quarter * (e[0] + e[1] - e[2] - e[3]);
    a.t = t;
    return a;
}

template <typename Scalar>
struct BraggProbabilities {
    Scalar m1_up{};
    Scalar m1_down{};
    Scalar p1_up{};
    Scalar p1_down{};

    Scalar sum() const { return m1_up + m1_down + p1_up + p1_down; }
};

/// Slow beat frequency Omega2 Omega3' / (2 Omega1) of the corotating spin.
template <typename Scalar>
Scalar spin_beat_frequency(const Frequencies<Scalar>& f) {
    return f.omega2 * f.omega3p / (Scalar(2) * f.omega1);
}

/// Fast spin precession frequency 2 Omega3'.
template <typename Scalar>
Scalar spin_precession_frequency(const Frequencies<Scalar>& f) {
    return Scalar(2) * f.omega3p;
}

/// Closed-form occupation probabilities of the corotating setup with the
/// fast (2 O2), intermediate (2 O3') and slow (O2 O3' / (2 O1)) scales.
template <typename Scalar>
BraggProbabilities<Scalar> analytic_probabilities_corotating(const Frequencies<Scalar>& f,
                                                             Scalar t) {
    using std::cos;
    using std::sin;
    const Scalar ca = cos(f.omega2 * t), sa = sin(f.omega2 * t);
    const Scalar cb = cos(f.omega3p * t), sb = sin(f.omega3p * t);
    const Scalar ss = sin(f.omega2 * f.omega3p * t / (Scalar(4) * f.omega1));
    const Scalar slow = ss * ss;
    const Scalar ca2 = ca * ca, sa2 = sa * sa, cb2 = cb * cb, sb2 = sb * sb;
    return {ca2 * cb2 + (sa2 - cb2) * slow, sa2 * sb2 + (-sa2 + cb2) * slow,
            sa2 * cb2 + (-sa2 + sb2) * slow, ca2 * sb2 + (sa2 - sb2) * slow};
}

/// Spin expectation values in units of hbar.
template <typename Scalar>
struct SpinExpectations {
    Scalar total{};
    Scalar m1{};  ///< conditioned on mode n = -1, NaN where unoccupied
    Scalar p1{};  ///< conditioned on mode n = +1, NaN where unoccupied
};

template <typename Scalar>
SpinExpectations<Scalar> analytic_spin_corotating(const Frequencies<Scalar>& f, Scalar t) {
    using std::cos;
    const Scalar half(0.5);
    const Scalar slow = cos(spin_beat_frequency(f) * t);
    const Scalar c2a = cos(Scalar(2) * f.omega2 * t);
    const Scalar c2b = cos(Scalar(2) * f.omega3p * t);
    const Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();

    SpinExpectations<Scalar> s;
    s.total = half * c2b * slow;
    const Scalar occ_m1 = half * (Scalar(1) + c2a * c2b);
    const Scalar occ_p1 = half * (Scalar(1) - c2a * c2b);
    s.m1 = occ_m1 < Scalar(occupation_threshold)
               ? nan
               : half * slow * (c2a + c2b) / (c2a * c2b + Scalar(1));
    s.p1 = occ_p1 < Scalar(occupation_threshold)
               ? nan
               : half * slow * (c2a - c2b) / (c2a * c2b - Scalar(1));
    return s;
}

/// (|c_{-1}^up|^2, |c_{+1}^up|^2) = (cos^2(O2' t), sin^2(O2' t)); spin-down
/// channels decouple and stay empty.
template <typename Scalar>
std::pair<Scalar, Scalar> analytic_probabilities_antirotating(const Frequencies<Scalar>& f,
                                                              Scalar t) {
    using std::cos;
    using std::sin;
    const Scalar c = cos(f.omega2p * t), s = sin(f.omega2p * t);
    return {c * c, s * s};
}

/// Exact eps_2 - eps_1 of the nonresonant system.
template <typename Scalar>
Scalar nonresonant_spin_frequency(const Frequencies<Scalar>& f) {
    const auto eps = nonresonant_eigenvalues(f);
    return eps[1] - eps[0];
}

/// Leading-order estimate 2 O2 O3' / O1 of eps_2 - eps_1.
template <typename Scalar>
Scalar nonresonant_spin_frequency_approx(const Frequencies<Scalar>& f) {
    return Scalar(2) * f.omega2 * f.omega3p / f.omega1;
}

/// (|c_0^up|^2, |c_0^down|^2) for an electron initially at rest with spin up.
template <typename Scalar>
std::pair<Scalar, Scalar> analytic_spin_nonresonant(const Frequencies<Scalar>& f, Scalar t) {
    using std::cos;
    using std::sin;
    const Scalar phase = nonresonant_spin_frequency(f) * t / Scalar(2);
    const Scalar c = cos(phase), s = sin(phase);
    return {c * c, s * s};
}

/// Admissible field amplitudes for a full spin flip within n_cycles laser
/// periods while staying in the Bragg regime.
struct FieldStrengthWindow {
    double lower;
    double upper;
    bool nonempty() const { return lower < upper; }
    bool contains(double e_hat) const { return e_hat > lower && e_hat < upper; }
};

FieldStrengthWindow field_strength_window(double omega, double n_cycles,
                                          const PhysicalConstants& u = atomic_units);

}  // namespace kapitza
