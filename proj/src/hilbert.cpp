#include "eventclock/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>

#include "eventclock/errors.hpp"
#include "eventclock/kernels.hpp"

namespace eventclock {
namespace {

using Index = Eigen::Index;

double max_abs(const Matrix& m) {
    double worst = 0.0;
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) worst = std::max(worst, std::abs(m(r, c)));
    return worst;
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionError(msg.str());
    }
}

std::span<const Complex> view(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw std::invalid_argument("StateVector: empty amplitude vector");
    const double n = norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg << "StateVector: norm " << n << " differs from 1 by more than " << kNormTolerance;
        throw std::invalid_argument(msg.str());
    }
}

StateVector StateVector::normalized(Vector amplitudes) {
    const double n = std::sqrt(kernels::norm_sq(view(amplitudes)));
    if (!(n > 0.0) || !std::isfinite(n))
        throw std::invalid_argument("StateVector::normalized: zero or non-finite vector");
    amplitudes /= n;
    return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw std::out_of_range("StateVector::basis: index out of range");
    Vector v = Vector::Zero(static_cast<Index>(dim));
    v(static_cast<Index>(index)) = 1.0;
    return StateVector(std::move(v));
}

double StateVector::norm() const { return std::sqrt(kernels::norm_sq(view(amplitudes_))); }

// ---------------------------------------------------------------------------
// DenseOperator

double hermiticity_residual(const Matrix& m) { return max_abs(m - m.adjoint()); }

double unitarity_residual(const Matrix& m) {
    return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
}

double idempotency_residual(const Matrix& m) { return max_abs(m * m - m); }

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    const Eigen::MatrixXcd dense = m;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dense);
    return svd.singularValues()(0);
}

DenseOperator::DenseOperator(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
        throw DimensionError("DenseOperator: entries must be a non-empty square matrix");
    const bool herm = hermiticity_residual(entries_) <= kFlagTolerance;
    if (herm) flags_ |= static_cast<unsigned>(OperatorFlag::hermitian);
    if (unitarity_residual(entries_) <= kFlagTolerance) flags_ |= static_cast<unsigned>(OperatorFlag::unitary);
    if (herm && idempotency_residual(entries_) <= kFlagTolerance)
        flags_ |= static_cast<unsigned>(OperatorFlag::projector);
}

DenseOperator DenseOperator::identity(std::size_t dim) {
    return DenseOperator(Matrix::Identity(static_cast<Index>(dim), static_cast<Index>(dim)));
}

DenseOperator DenseOperator::zero(std::size_t dim) {
    return DenseOperator(Matrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim)));
}

DenseOperator DenseOperator::adjoint() const { return DenseOperator(entries_.adjoint()); }

Vector DenseOperator::apply(const Vector& psi) const {
    require_same_dim(dim(), static_cast<std::size_t>(psi.size()), "DenseOperator::apply");
    Vector out(psi.size());
    kernels::gemv({entries_.data(), static_cast<std::size_t>(entries_.size())}, view(psi),
                  {out.data(), static_cast<std::size_t>(out.size())}, dim(), dim());
    return out;
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
    require_same_dim(a.dim(), b.dim(), "operator*");
    return DenseOperator(a.entries_ * b.entries_);
}

DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
    require_same_dim(a.dim(), b.dim(), "operator+");
    return DenseOperator(a.entries_ + b.entries_);
}

DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
    require_same_dim(a.dim(), b.dim(), "operator-");
    return DenseOperator(a.entries_ - b.entries_);
}

DenseOperator operator*(Complex s, const DenseOperator& a) { return DenseOperator(s * a.entries_); }

// ---------------------------------------------------------------------------
// PiecewiseHamiltonian

PiecewiseHamiltonian::PiecewiseHamiltonian(std::size_t dim, std::vector<HamiltonianSegment> segments)
    : dim_(dim), segments_(std::move(segments)) {
    if (dim_ == 0) throw std::invalid_argument("PiecewiseHamiltonian: zero dimension");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& seg = segments_[i];
        if (!(seg.t_start < seg.t_end))
            throw std::invalid_argument("PiecewiseHamiltonian: segment with t_start >= t_end");
        if (i > 0 && seg.t_start < segments_[i - 1].t_end)
            throw std::invalid_argument("PiecewiseHamiltonian: segments overlap or are out of order");
        require_same_dim(dim_, seg.generator.dim(), "PiecewiseHamiltonian");
        if (!seg.generator.is_hermitian())
            throw std::invalid_argument("PiecewiseHamiltonian: generator is not certified hermitian");
    }
}

PiecewiseHamiltonian PiecewiseHamiltonian::constant(const DenseOperator& generator, double t_start,
                                                    double t_end) {
    return PiecewiseHamiltonian(generator.dim(), {HamiltonianSegment{t_start, t_end, generator}});
}

bool PiecewiseHamiltonian::inside_segment(double t) const noexcept {
    return std::any_of(segments_.begin(), segments_.end(),
                       [t](const HamiltonianSegment& s) { return s.t_start <= t && t < s.t_end; });
}

DenseOperator PiecewiseHamiltonian::generator_at(double t) const {
    for (const auto& s : segments_)
        if (s.t_start <= t && t < s.t_end) return s.generator;
    return DenseOperator::zero(dim_);
}

// ---------------------------------------------------------------------------
// Free functions

StateVector tensor(const StateVector& a, const StateVector& b) {
    const Index nb = static_cast<Index>(b.dim());
    Vector out(static_cast<Index>(a.dim()) * nb);
    for (Index i = 0; i < static_cast<Index>(a.dim()); ++i) out.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
    return StateVector::normalized(std::move(out));
}

DenseOperator tensor(const DenseOperator& a, const DenseOperator& b) {
    const Index na = static_cast<Index>(a.dim());
    const Index nb = static_cast<Index>(b.dim());
    Matrix out(na * nb, na * nb);
    for (Index i = 0; i < na; ++i)
        for (Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a.entries()(i, j) * b.entries();
    return DenseOperator(std::move(out));
}

DenseOperator matrix_exponential_hermitian_generator(const DenseOperator& g, double s) {
    if (!g.is_hermitian())
        throw std::invalid_argument("matrix_exponential_hermitian_generator: generator is not hermitian");
    if (s == 0.0) return DenseOperator::identity(g.dim());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(Eigen::MatrixXcd(g.entries()));
    if (eig.info() != Eigen::Success)
        throw CertificationError("matrix_exponential_hermitian_generator: eigensolver did not converge");

    const Eigen::MatrixXcd& v = eig.eigenvectors();
    Eigen::VectorXcd phases(v.cols());
    for (Index k = 0; k < v.cols(); ++k) phases(k) = std::polar(1.0, -s * eig.eigenvalues()(k));

    DenseOperator u(Matrix(v * phases.asDiagonal() * v.adjoint()));
    if (!u.is_unitary()) {
        std::ostringstream msg;
        msg << "matrix_exponential_hermitian_generator: result failed unitarity certification (residual "
            << unitarity_residual(u.entries()) << ")";
        throw CertificationError(msg.str());
    }
    return u;
}

DenseOperator propagator(const PiecewiseHamiltonian& h, double t0, double t1) {
    if (!(t0 <= t1)) throw std::invalid_argument("propagator: requires t0 <= t1");

    Matrix u = Matrix::Identity(static_cast<Index>(h.dim()), static_cast<Index>(h.dim()));
    for (const auto& seg : h.segments()) {
        const double lo = std::max(t0, seg.t_start);
        const double hi = std::min(t1, seg.t_end);
        if (hi <= lo) continue;
        u = matrix_exponential_hermitian_generator(seg.generator, hi - lo).entries() * u;
    }
    DenseOperator out(std::move(u));
    if (!out.is_unitary()) {
        std::ostringstream msg;
        msg << "propagator: product failed unitarity certification (residual "
            << unitarity_residual(out.entries()) << ")";
        throw CertificationError(msg.str());
    }
    return out;
}

DenseOperator heisenberg(const DenseOperator& op, const DenseOperator& u) {
    require_same_dim(op.dim(), u.dim(), "heisenberg");
    if (!u.is_unitary()) throw std::invalid_argument("heisenberg: evolution operator is not certified unitary");

    DenseOperator out(Matrix(u.entries().adjoint() * op.entries() * u.entries()));
    if (op.is_hermitian() && !out.is_hermitian())
        throw CertificationError("heisenberg: conjugation lost hermiticity");
    if (op.is_projector() && !out.is_projector())
        throw CertificationError("heisenberg: conjugation lost idempotency");
    return out;
}

double expectation(const DenseOperator& op, const StateVector& psi) {
    require_same_dim(op.dim(), psi.dim(), "expectation");
    if (!op.is_hermitian()) throw std::invalid_argument("expectation: operator is not certified hermitian");

    const Vector image = op.apply(psi);
    const Complex value = kernels::inner(view(psi.amplitudes()), view(image));
    if (std::abs(value.imag()) > kFlagTolerance) {
        std::ostringstream msg;
        msg << "expectation: imaginary residue " << value.imag() << " exceeds " << kFlagTolerance;
        throw CertificationError(msg.str());
    }
    return value.real();
}

DenseOperator pauli_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return DenseOperator(std::move(m));
}

DenseOperator pauli_y() {
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return DenseOperator(std::move(m));
}

DenseOperator pauli_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return DenseOperator(std::move(m));
}

}  // namespace eventclock
