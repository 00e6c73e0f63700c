#pragma once

// Smith normal form over the discrete valuation ring Z_(p), and the kernel /
// cokernel / preimage computations built on it.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracture/padic.hpp"
#include "fracture/pgroup.hpp"

namespace fracture {

inline constexpr int kDefaultVerificationExponent = 16;

/// U * A * V = D with U, V invertible over Z_(p) and D diagonal with entries
/// p^{valuations[k]} (kInfinity meaning 0), valuations nondecreasing.
struct SnfResult {
    long prime = 2;
    int verification_exponent = kDefaultVerificationExponent;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<int> valuations;  ///< length min(rows, cols)
    Matrix u, v, u_inv, v_inv;
    bool certified = false;  ///< U*A*V == D checked modulo p^K

    /// Number of nonzero diagonal entries.
    std::size_t rank() const {
        return static_cast<std::size_t>(
            std::count_if(valuations.begin(), valuations.end(), [](int x) { return x != kInfinity; }));
    }

    Matrix diagonal() const {
        Matrix d(rows, cols);
        for (std::size_t k = 0; k < valuations.size(); ++k)
            if (valuations[k] != kInfinity) d(k, k) = Scalar(prime_power(prime, valuations[k]));
        return d;
    }

    /// U and V reduced to integer matrices modulo p^K.
    Matrix u_residue() const { return reduce(u); }
    Matrix v_residue() const { return reduce(v); }

  private:
    Matrix reduce(const Matrix& m) const {
        Matrix out(m.rows(), m.cols());
        for (std::size_t a = 0; a < m.rows(); ++a)
            for (std::size_t b = 0; b < m.cols(); ++b)
                out(a, b) = Scalar(residue(m(a, b), prime, verification_exponent));
        return out;
    }
};

namespace detail {

inline bool congruent_mod(const Matrix& x, const Matrix& y, long p, int k) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    for (std::size_t a = 0; a < x.rows(); ++a)
        for (std::size_t b = 0; b < x.cols(); ++b)
            if (residue(x(a, b), p, k) != residue(y(a, b), p, k)) return false;
    return true;
}

}  // namespace detail

/// Smith normal form of a p-integral matrix. Pivots are chosen by minimal
/// valuation over the remaining block, ties broken by lowest row, then lowest
/// column, so the transforms are deterministic.
inline SnfResult smith_normal_form(const Matrix& a, long p, int verification_exponent = kDefaultVerificationExponent) {
    if (verification_exponent < 1) throw std::invalid_argument("smith_normal_form: K must be >= 1");
    if (!a.is_integral(p)) throw std::invalid_argument("smith_normal_form: matrix is not p-integral");

    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    Matrix w = a;
    SnfResult res;
    res.prime = p;
    res.verification_exponent = verification_exponent;
    res.rows = m;
    res.cols = n;
    res.u = Matrix::identity(m);
    res.u_inv = Matrix::identity(m);
    res.v = Matrix::identity(n);
    res.v_inv = Matrix::identity(n);
    const std::size_t steps = std::min(m, n);
    res.valuations.assign(steps, kInfinity);

    for (std::size_t t = 0; t < steps; ++t) {
        int best = kInfinity;
        std::size_t pr = t, pc = t;
        for (std::size_t r = t; r < m; ++r)
            for (std::size_t c = t; c < n; ++c) {
                if (w(r, c) == 0) continue;
                const int val = valuation(w(r, c), p);
                if (val < best) {
                    best = val;
                    pr = r;
                    pc = c;
                }
            }
        if (best == kInfinity) break;

        w.swap_rows(t, pr);
        res.u.swap_rows(t, pr);
        res.u_inv.swap_cols(t, pr);
        w.swap_cols(t, pc);
        res.v.swap_cols(t, pc);
        res.v_inv.swap_rows(t, pc);

        // Normalize the pivot to exactly p^best.
        const Scalar s = 1 / unit_part(w(t, t), p);
        for (std::size_t c = 0; c < n; ++c) w(t, c) *= s;
        for (std::size_t c = 0; c < m; ++c) res.u(t, c) *= s;
        for (std::size_t r = 0; r < m; ++r) res.u_inv(r, t) /= s;

        const Scalar pivot = w(t, t);
        for (std::size_t r = t + 1; r < m; ++r) {
            if (w(r, t) == 0) continue;
            const Scalar f = w(r, t) / pivot;
            for (std::size_t c = t; c < n; ++c) w(r, c) -= f * w(t, c);
            for (std::size_t c = 0; c < m; ++c) res.u(r, c) -= f * res.u(t, c);
            for (std::size_t q = 0; q < m; ++q) res.u_inv(q, t) += f * res.u_inv(q, r);
        }
        for (std::size_t c = t + 1; c < n; ++c) {
            if (w(t, c) == 0) continue;
            const Scalar g = w(t, c) / pivot;
            for (std::size_t r = t; r < m; ++r) w(r, c) -= g * w(r, t);
            for (std::size_t r = 0; r < n; ++r) res.v(r, c) -= g * res.v(r, t);
            for (std::size_t q = 0; q < n; ++q) res.v_inv(t, q) += g * res.v_inv(c, q);
        }
        res.valuations[t] = best;
    }

    res.certified = detail::congruent_mod(res.u * a * res.v, res.diagonal(), p, verification_exponent);
    return res;
}

/// Solve A X = B over Z_(p). Returns nullopt when no p-integral solution exists.
/// Among solutions, the one with zero components along ker A (in V-coordinates)
/// is returned.
inline std::optional<Matrix> solve(const SnfResult& s, const Matrix& b) {
    if (b.rows() != s.rows) throw std::invalid_argument("solve: shape mismatch");
    const Matrix ub = s.u * b;
    Matrix y(s.cols, b.cols());
    for (std::size_t r = 0; r < s.rows; ++r) {
        const int val = r < s.valuations.size() ? s.valuations[r] : kInfinity;
        for (std::size_t c = 0; c < b.cols(); ++c) {
            if (val == kInfinity) {
                if (ub(r, c) != 0) return std::nullopt;
                continue;
            }
            Scalar q = ub(r, c) / Scalar(prime_power(s.prime, val));
            if (!is_integral(q, s.prime)) return std::nullopt;
            y(r, c) = std::move(q);
        }
    }
    return s.v * y;
}

inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b, long p) {
    return solve(smith_normal_form(a, p), b);
}

/// [F | R_target]: F together with the relations of the target. Vectors in
/// its kernel are exactly the relations x with f(x) = 0 in the target.
inline Matrix relation_augmented(const PHom& f) { return f.matrix().hconcat(relation_matrix(f.target())); }

/// Kernel of a PHom: abstract group, inclusion into the source, and a
/// coordinate map for source vectors that lie in the kernel.
class Kernel {
  public:
    explicit Kernel(const PHom& f) : source_(f.source()) {
        const long p = f.prime();
        const std::size_t n_src = f.source().generators();
        const Matrix g = relation_augmented(f);
        const SnfResult sg = smith_normal_form(g, p);
        const std::size_t r = sg.rank();

        // Basis of the lattice L = {x : f(x) = 0 in target} (projection of ker g).
        std::vector<std::size_t> null_cols;
        for (std::size_t c = r; c < g.cols(); ++c) null_cols.push_back(c);
        basis_ = sg.v.select_cols(null_cols).block(0, 0, n_src, null_cols.size());
        basis_snf_ = smith_normal_form(basis_, p);

        // Source relations expressed in the basis of L; L contains them because f is well defined.
        const Matrix rel = relation_matrix(f.source());
        auto c = solve(basis_snf_, rel);
        if (!c) throw std::invalid_argument("Kernel: map is not well defined (source relations leave the kernel)");
        const SnfResult sc = smith_normal_form(*c, p);
        u_c_ = sc.u;

        const std::size_t k = basis_.cols();
        struct Gen {
            std::size_t index;
            int exponent;
        };
        std::vector<Gen> gens;
        for (std::size_t idx = 0; idx < k; ++idx) {
            const int val = idx < sc.valuations.size() ? sc.valuations[idx] : kInfinity;
            if (val == 0) continue;
            gens.push_back({idx, val});
        }
        std::stable_sort(gens.begin(), gens.end(), [](const Gen& x, const Gen& y) { return x.exponent > y.exponent; });
        int rank = 0;
        std::vector<int> torsion;
        for (const auto& gen : gens) {
            selected_.push_back(gen.index);
            if (gen.exponent == kInfinity)
                ++rank;
            else
                torsion.push_back(gen.exponent);
        }
        group_ = PGroup(p, rank, torsion);
        const Matrix incl = basis_ * sc.u_inv.select_cols(selected_);
        inclusion_ = PHom(group_, source_, incl);
    }

    const PGroup& group() const { return group_; }
    const PHom& inclusion() const { return inclusion_; }

    /// Kernel coordinates of a source vector (column) known to lie in the kernel.
    std::optional<Matrix> coordinates(const Matrix& x) const {
        if (group_.is_zero()) return Matrix(0, x.cols());
        // x is only defined modulo source relations; lift through [basis | R_source].
        const Matrix aug = basis_.hconcat(relation_matrix(source_));
        auto sol = solve(aug, x, source_.prime());
        if (!sol) return std::nullopt;
        const Matrix c = sol->block(0, 0, basis_.cols(), x.cols());
        const Matrix y = (u_c_ * c).select_rows(selected_);
        return PHom::reduce_column(group_, y);
    }

  private:
    PGroup source_;
    PGroup group_;
    PHom inclusion_;
    Matrix basis_;
    SnfResult basis_snf_;
    Matrix u_c_;
    std::vector<std::size_t> selected_;
};

/// Cokernel of a PHom: abstract group, projection from the target, and a
/// set-theoretic section (cokernel generators as target vectors).
class Cokernel {
  public:
    explicit Cokernel(const PHom& f) : target_(f.target()) {
        const long p = f.prime();
        const Matrix g = relation_augmented(f);
        const SnfResult sg = smith_normal_form(g, p);
        const std::size_t n_tgt = f.target().generators();
        struct Gen {
            std::size_t index;
            int exponent;
        };
        std::vector<Gen> gens;
        for (std::size_t r = 0; r < n_tgt; ++r) {
            const int val = r < sg.valuations.size() ? sg.valuations[r] : kInfinity;
            if (val == 0) continue;
            gens.push_back({r, val});
        }
        std::stable_sort(gens.begin(), gens.end(), [](const Gen& x, const Gen& y) { return x.exponent > y.exponent; });
        std::vector<std::size_t> idx;
        int rank = 0;
        std::vector<int> torsion;
        for (const auto& gen : gens) {
            idx.push_back(gen.index);
            if (gen.exponent == kInfinity)
                ++rank;
            else
                torsion.push_back(gen.exponent);
        }
        group_ = PGroup(p, rank, torsion);
        projection_ = PHom(target_, group_, sg.u.select_rows(idx));
        section_ = sg.u_inv.select_cols(idx);
    }

    const PGroup& group() const { return group_; }
    const PHom& projection() const { return projection_; }
    /// target gens x cokernel gens; projection * section = identity on the cokernel.
    const Matrix& section() const { return section_; }

  private:
    PGroup target_;
    PGroup group_;
    PHom projection_;
    Matrix section_;
};

/// Kernel as (group, inclusion).
inline std::pair<PGroup, PHom> kernel(const PHom& f) {
    Kernel k(f);
    return {k.group(), k.inclusion()};
}

/// Cokernel as (group, projection).
inline std::pair<PGroup, PHom> cokernel(const PHom& f) {
    Cokernel c(f);
    return {c.group(), c.projection()};
}

/// Source vector x with f(x) = y in the target, if one exists.
inline std::optional<Matrix> preimage(const PHom& f, const Matrix& y) {
    const Matrix g = relation_augmented(f);
    auto sol = solve(g, y, f.prime());
    if (!sol) return std::nullopt;
    return PHom::reduce_column(f.source(), sol->block(0, 0, f.source().generators(), y.cols()));
}

inline bool is_isomorphism(const PHom& f) {
    return Kernel(f).group().is_zero() && Cokernel(f).group().is_zero();
}

/// Inverse of an isomorphism; nullopt if f is not invertible.
inline std::optional<PHom> inverse(const PHom& f) {
    if (!is_isomorphism(f)) return std::nullopt;
    auto x = preimage(f, Matrix::identity(f.target().generators()));
    if (!x) return std::nullopt;
    return PHom(f.target(), f.source(), *x);
}

/// Structure of the image f(source) as an abstract group.
inline PGroup image(const PHom& f) {
    // im f ≅ source / ker f
    Kernel k(f);
    return Cokernel(k.inclusion()).group();
}

}  // namespace fracture
