#pragma once

// Exact finite-dimensional complex linear algebra: states, operators, tensor
// products, piecewise-constant propagators and Heisenberg evolution.
//
// Conventions (used throughout the library):
//   * hbar = 1; times and energies share these units.
//   * Kronecker products put the left factor on the slow index:
//       (A (x) B)[i*dimB + k, j*dimB + l] = A[i,j] B[k,l],
//     so |s> (x) |d> has amplitude at index s*dimB + d.
//   * Operator flags are certified numerically with tolerance kFlagTolerance
//     every time an operator is constructed; they are never asserted by hand.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace eventclock {

using Complex = std::complex<double>;
using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

inline constexpr double kFlagTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-10;

/// Unit-norm amplitude vector. Construction either checks or establishes
/// ||psi|| = 1 (within kNormTolerance).
class StateVector {
public:
    /// Requires ||amplitudes|| = 1 within kNormTolerance.
    explicit StateVector(Vector amplitudes);

    /// Rescales to unit norm; throws on a zero (or non-finite) vector.
    static StateVector normalized(Vector amplitudes);
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    const Vector& amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }
    double norm() const;

private:
    Vector amplitudes_;
};

enum class OperatorFlag : unsigned { hermitian = 1u, unitary = 2u, projector = 4u };

/// Square complex matrix together with the flags it was certified to carry.
class DenseOperator {
public:
    explicit DenseOperator(Matrix entries);

    static DenseOperator identity(std::size_t dim);
    static DenseOperator zero(std::size_t dim);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& entries() const noexcept { return entries_; }
    Complex operator()(std::size_t r, std::size_t c) const {
        return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    bool has(OperatorFlag flag) const noexcept { return (flags_ & static_cast<unsigned>(flag)) != 0; }
    bool is_hermitian() const noexcept { return has(OperatorFlag::hermitian); }
    bool is_unitary() const noexcept { return has(OperatorFlag::unitary); }
    bool is_projector() const noexcept { return has(OperatorFlag::projector); }

    DenseOperator adjoint() const;

    /// A|psi> without renormalisation.
    Vector apply(const Vector& psi) const;
    Vector apply(const StateVector& psi) const { return apply(psi.amplitudes()); }

    friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
    friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b);
    friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b);
    friend DenseOperator operator*(Complex s, const DenseOperator& a);

private:
    Matrix entries_;
    unsigned flags_ = 0;
};

// Residuals behind the certification (max-abs entrywise).
double hermiticity_residual(const Matrix& m);
double unitarity_residual(const Matrix& m);
double idempotency_residual(const Matrix& m);

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Hermitian generator active on [t_start, t_end).
struct HamiltonianSegment {
    double t_start;
    double t_end;
    DenseOperator generator;
};

/// Time-ordered, non-overlapping segments of constant Hermitian generators.
/// Outside every segment the generator is zero.
class PiecewiseHamiltonian {
public:
    PiecewiseHamiltonian(std::size_t dim, std::vector<HamiltonianSegment> segments);

    static PiecewiseHamiltonian constant(const DenseOperator& generator, double t_start, double t_end);
    static PiecewiseHamiltonian zero(std::size_t dim) { return PiecewiseHamiltonian(dim, {}); }

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<HamiltonianSegment>& segments() const noexcept { return segments_; }

    /// Generator in force at time t (zero outside all segments).
    DenseOperator generator_at(double t) const;
    bool inside_segment(double t) const noexcept;

private:
    std::size_t dim_;
    std::vector<HamiltonianSegment> segments_;
};

StateVector tensor(const StateVector& a, const StateVector& b);
DenseOperator tensor(const DenseOperator& a, const DenseOperator& b);

/// exp(-i s g) for Hermitian g via its eigendecomposition.
DenseOperator matrix_exponential_hermitian_generator(const DenseOperator& g, double s);

/// Time-ordered product of segment exponentials over [t0, t1].
DenseOperator propagator(const PiecewiseHamiltonian& h, double t0, double t1);

/// U^dagger op U.
DenseOperator heisenberg(const DenseOperator& op, const DenseOperator& u);

/// <psi|op|psi> for Hermitian op.
double expectation(const DenseOperator& op, const StateVector& psi);

/// Pauli matrices and the 2x2 identity in the {|up>, |down>} basis (up = index 0).
DenseOperator pauli_x();
DenseOperator pauli_y();
DenseOperator pauli_z();

}  // namespace eventclock
