#pragma once

// Dense complex operators on a composite Hilbert space.
//
// Storage is Eigen's default column-major layout: element (i, j) of an
// n x n matrix lives at offset i + j * n. Composite indices are
// lexicographic with the first subsystem most significant, so for the
// physical layout (spin, phonon, magnon) the index of |s, m, k> is
// (s * N_b + m) * N_a + k.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace tripartite {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

class dimension_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Subsystem slots of the physical tripartite layout.
enum class Subsystem : std::size_t { spin = 0, phonon = 1, magnon = 2 };

constexpr std::size_t slot(Subsystem s) noexcept { return static_cast<std::size_t>(s); }

class SpaceLayout {
public:
    SpaceLayout(std::vector<std::size_t> dims, std::vector<std::string> labels)
        : dims_(std::move(dims)), labels_(std::move(labels)) {
        if (dims_.empty())
            throw dimension_error("SpaceLayout: no subsystems");
        if (labels_.size() != dims_.size())
            throw dimension_error("SpaceLayout: label count does not match dimension count");
        for (auto d : dims_)
            if (d < 2)
                throw dimension_error("SpaceLayout: every subsystem dimension must be >= 2");
        strides_.assign(dims_.size(), 1);
        for (std::size_t i = dims_.size() - 1; i > 0; --i)
            strides_[i - 1] = strides_[i] * dims_[i];
    }

    explicit SpaceLayout(std::vector<std::size_t> dims)
        : SpaceLayout(dims, default_labels(dims.size())) {}

    /// The (spin, phonon, magnon) layout used by every physical model.
    static SpaceLayout tripartite(std::size_t phonon_cutoff, std::size_t magnon_cutoff) {
        return SpaceLayout({2, phonon_cutoff, magnon_cutoff}, {"spin", "phonon", "magnon"});
    }

    std::size_t size() const noexcept { return dims_.size(); }
    std::size_t dim(std::size_t slot) const { return dims_.at(slot); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t stride(std::size_t slot) const { return strides_.at(slot); }

    std::size_t total() const noexcept {
        return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>{});
    }

    std::size_t index(std::initializer_list<std::size_t> digits) const {
        if (digits.size() != dims_.size())
            throw dimension_error("SpaceLayout::index: wrong number of digits");
        std::size_t idx = 0, k = 0;
        for (auto d : digits) {
            if (d >= dims_[k])
                throw dimension_error("SpaceLayout::index: digit out of range");
            idx += d * strides_[k++];
        }
        return idx;
    }

    std::size_t digit(std::size_t index, std::size_t slot) const {
        return (index / strides_.at(slot)) % dims_[slot];
    }

    /// Layout of the kept subsystems, in their original order.
    SpaceLayout restrict_to(const std::vector<std::size_t>& keep) const {
        std::vector<std::size_t> d;
        std::vector<std::string> l;
        for (auto s : keep) {
            d.push_back(dims_.at(s));
            l.push_back(labels_[s]);
        }
        return SpaceLayout(std::move(d), std::move(l));
    }

    bool operator==(const SpaceLayout& o) const { return dims_ == o.dims_ && labels_ == o.labels_; }

private:
    static std::vector<std::string> default_labels(std::size_t n) {
        std::vector<std::string> l;
        for (std::size_t i = 0; i < n; ++i)
            l.push_back("s" + std::to_string(i));
        return l;
    }

    std::vector<std::size_t> dims_;
    std::vector<std::string> labels_;
    std::vector<std::size_t> strides_;
};

inline void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols())
        throw dimension_error(std::string(what) + ": matrix is not square");
}

inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// max_ij |A_ij - conj(A_ji)| relative to max_ij |A_ij|.
inline double hermiticity_defect(const ComplexMatrix& m) {
    require_square(m, "hermiticity_defect");
    const double scale = max_abs(m);
    if (scale == 0.0)
        return 0.0;
    return max_abs(m - m.adjoint()) / scale;
}

inline bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-12) {
    return m.rows() == m.cols() && hermiticity_defect(m) < rel_tol;
}

/// (A ⊗ B)[i*dB + k, j*dB + l] = A[i,j] * B[k,l]
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square(a, "kron");
    require_square(b, "kron");
    const Eigen::Index da = a.rows(), db = b.rows();
    ComplexMatrix out(da * db, da * db);
    for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index i = 0; i < da; ++i)
            out.block(i * db, j * db, db, db) = a(i, j) * b;
    return out;
}

/// Truncated bosonic lowering operator: A[k-1, k] = sqrt(k).
inline ComplexMatrix annihilation(std::size_t n) {
    if (n < 2)
        throw dimension_error("annihilation: cutoff must be >= 2");
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 1; k < n; ++k)
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

inline ComplexMatrix creation(std::size_t n) { return annihilation(n).adjoint(); }

inline ComplexMatrix number_op(std::size_t n) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < n; ++k)
        m(k, k) = static_cast<double>(k);
    return m;
}

// Spin basis: index 0 = |e>, index 1 = |g>, so sigma_z = diag(+1, -1).
namespace pauli {
inline ComplexMatrix x() { return (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished(); }
inline ComplexMatrix y() {
    return (ComplexMatrix(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished();
}
inline ComplexMatrix z() { return (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished(); }
/// sigma^+ = |e><g|
inline ComplexMatrix raising() { return (ComplexMatrix(2, 2) << 0, 1, 0, 0).finished(); }
/// sigma^- = |g><e|
inline ComplexMatrix lowering() { return (ComplexMatrix(2, 2) << 0, 0, 1, 0).finished(); }
} // namespace pauli

/// I ⊗ ... ⊗ op ⊗ ... ⊗ I with op in the given slot.
inline ComplexMatrix embed(const ComplexMatrix& op, std::size_t slot, const SpaceLayout& layout) {
    require_square(op, "embed");
    if (slot >= layout.size())
        throw dimension_error("embed: slot out of range");
    if (static_cast<std::size_t>(op.rows()) != layout.dim(slot))
        throw dimension_error("embed: operator dimension does not match subsystem dimension");
    // Direct construction avoids materialising the intermediate Kronecker factors.
    const std::size_t inner = layout.stride(slot);
    const std::size_t d = layout.dim(slot);
    const std::size_t outer = layout.total() / (inner * d);
    const auto n = static_cast<Eigen::Index>(layout.total());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < d; ++i) {
                const cplx v = op(i, j);
                if (v == cplx{})
                    continue;
                for (std::size_t in = 0; in < inner; ++in) {
                    const auto r = static_cast<Eigen::Index>((o * d + i) * inner + in);
                    const auto c = static_cast<Eigen::Index>((o * d + j) * inner + in);
                    out(r, c) = v;
                }
            }
    return out;
}

inline ComplexMatrix embed(const ComplexMatrix& op, Subsystem s, const SpaceLayout& layout) {
    return embed(op, slot(s), layout);
}

namespace detail {

inline std::vector<std::size_t> checked_subset(const std::vector<std::size_t>& set,
                                               const SpaceLayout& layout, const char* what) {
    if (set.empty())
        throw dimension_error(std::string(what) + ": empty subsystem set");
    std::vector<std::size_t> s = set;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw dimension_error(std::string(what) + ": repeated subsystem");
    if (s.back() >= layout.size())
        throw dimension_error(std::string(what) + ": subsystem index out of range");
    return s;
}

inline void check_state_dims(const ComplexMatrix& rho, const SpaceLayout& layout, const char* what) {
    require_square(rho, what);
    if (static_cast<std::size_t>(rho.rows()) != layout.total())
        throw dimension_error(std::string(what) + ": matrix dimension does not match layout");
}

} // namespace detail

/// Reduced operator on the subsystems in `keep` (any order; result keeps layout order).
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, const SpaceLayout& layout,
                                   const std::vector<std::size_t>& keep) {
    detail::check_state_dims(rho, layout, "partial_trace");
    const auto kept = detail::checked_subset(keep, layout, "partial_trace");
    std::vector<std::size_t> traced;
    for (std::size_t s = 0; s < layout.size(); ++s)
        if (!std::binary_search(kept.begin(), kept.end(), s))
            traced.push_back(s);
    if (traced.empty())
        return rho;

    const SpaceLayout kl = layout.restrict_to(kept);
    const std::size_t nk = kl.total();
    std::size_t nt = 1;
    for (auto s : traced)
        nt *= layout.dim(s);

    // Full-space offsets of every kept and traced configuration.
    auto offsets = [&](const std::vector<std::size_t>& slots, std::size_t count) {
        std::vector<std::size_t> off(count, 0);
        for (std::size_t c = 0; c < count; ++c) {
            std::size_t rem = c, o = 0;
            for (std::size_t q = slots.size(); q-- > 0;) {
                const std::size_t d = layout.dim(slots[q]);
                o += (rem % d) * layout.stride(slots[q]);
                rem /= d;
            }
            off[c] = o;
        }
        return off;
    };
    const auto koff = offsets(kept, nk);
    const auto toff = offsets(traced, nt);

    ComplexMatrix out = ComplexMatrix::Zero(nk, nk);
    for (std::size_t j = 0; j < nk; ++j)
        for (std::size_t i = 0; i < nk; ++i) {
            cplx acc{};
            for (std::size_t t = 0; t < nt; ++t)
                acc += rho(koff[i] + toff[t], koff[j] + toff[t]);
            out(i, j) = acc;
        }
    return out;
}

/// Transpose of the indices belonging to the subsystems in `part`.
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, const SpaceLayout& layout,
                                       const std::vector<std::size_t>& part) {
    detail::check_state_dims(rho, layout, "partial_transpose");
    const auto sel = detail::checked_subset(part, layout, "partial_transpose");
    const std::size_t n = layout.total();

    // Split every index into its selected part and the remainder.
    std::vector<std::size_t> sel_part(n, 0);
    for (std::size_t idx = 0; idx < n; ++idx)
        for (auto s : sel)
            sel_part[idx] += layout.digit(idx, s) * layout.stride(s);

    ComplexMatrix out(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t ii = i - sel_part[i] + sel_part[j];
            const std::size_t jj = j - sel_part[j] + sel_part[i];
            out(i, j) = rho(ii, jj);
        }
    return out;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

/// Density matrix |psi><psi|.
inline ComplexMatrix projector(const ComplexVector& psi) { return psi * psi.adjoint(); }

inline ComplexVector basis_state(std::size_t index, std::size_t dim) {
    if (index >= dim)
        throw dimension_error("basis_state: index out of range");
    ComplexVector v = ComplexVector::Zero(dim);
    v(index) = 1.0;
    return v;
}

} // namespace tripartite
