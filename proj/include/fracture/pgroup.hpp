#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracture/padic.hpp"

namespace fracture {

/// Finitely generated module over the p-adic integers:
/// Z_p^rank (+) Z/p^{e_1} (+) ... (+) Z/p^{e_t}, with e_1 >= e_2 >= ... >= 1.
///
/// The generator basis is ordered: free generators first, then torsion
/// generators in the order of `torsion()`. Labels are advisory only.
class PGroup {
  public:
    PGroup() = default;

    PGroup(long prime, int rank, std::vector<int> torsion, std::vector<std::string> labels = {})
        : prime_(prime), rank_(rank), torsion_(std::move(torsion)), labels_(std::move(labels)) {
        if (!is_prime(prime_)) throw std::invalid_argument("PGroup: " + std::to_string(prime_) + " is not prime");
        if (rank_ < 0) throw std::invalid_argument("PGroup: negative rank");
        for (std::size_t k = 0; k < torsion_.size(); ++k) {
            if (torsion_[k] < 1) throw std::invalid_argument("PGroup: torsion exponent < 1");
            if (k > 0 && torsion_[k] > torsion_[k - 1])
                throw std::invalid_argument("PGroup: torsion exponents must be nonincreasing");
        }
        if (!labels_.empty() && labels_.size() != generators())
            throw std::invalid_argument("PGroup: label count does not match generator count");
    }

    static PGroup zero(long p) { return PGroup(p, 0, {}); }
    static PGroup free(long p, int rank = 1) { return PGroup(p, rank, {}); }
    static PGroup cyclic(long p, int exponent) { return PGroup(p, 0, {exponent}); }

    long prime() const { return prime_; }
    int rank() const { return rank_; }
    const std::vector<int>& torsion() const { return torsion_; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::size_t generators() const { return static_cast<std::size_t>(rank_) + torsion_.size(); }
    bool is_zero() const { return generators() == 0; }
    bool is_finite() const { return rank_ == 0; }

    /// Exponent e of generator g (order p^e), or kInfinity for a free generator.
    int exponent(std::size_t g) const {
        if (g >= generators()) throw std::out_of_range("PGroup::exponent");
        return g < static_cast<std::size_t>(rank_) ? kInfinity : torsion_[g - rank_];
    }

    /// log_p of the order of the torsion part.
    int torsion_length() const { return std::accumulate(torsion_.begin(), torsion_.end(), 0); }

    std::string label(std::size_t g) const { return labels_.empty() ? std::string{} : labels_.at(g); }

    PGroup with_labels(std::vector<std::string> labels) const {
        return PGroup(prime_, rank_, torsion_, std::move(labels));
    }

    /// Isomorphism type only; labels are ignored.
    bool same_structure(const PGroup& o) const {
        return prime_ == o.prime_ && rank_ == o.rank_ && torsion_ == o.torsion_;
    }

    bool operator==(const PGroup& o) const { return same_structure(o); }

    std::string describe() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        auto sep = [&] {
            if (!first) os << " + ";
            first = false;
        };
        if (rank_ > 0) {
            sep();
            os << "Z_" << prime_;
            if (rank_ > 1) os << "^" << rank_;
        }
        for (int e : torsion_) {
            sep();
            if (e == 1)
                os << "F_" << prime_;
            else
                os << "Z/" << prime_ << "^" << e;
        }
        return os.str();
    }

  private:
    long prime_ = 2;
    int rank_ = 0;
    std::vector<int> torsion_;
    std::vector<std::string> labels_;
};

inline std::ostream& operator<<(std::ostream& os, const PGroup& g) { return os << g.describe(); }

/// Diagonal relation matrix: one column p^{e_k} per torsion generator.
inline Matrix relation_matrix(const PGroup& g) {
    Matrix r(g.generators(), g.torsion().size());
    for (std::size_t k = 0; k < g.torsion().size(); ++k)
        r(static_cast<std::size_t>(g.rank()) + k, k) = Scalar(prime_power(g.prime(), g.torsion()[k]));
    return r;
}

/// Homomorphism between PGroups, as a (target gens) x (source gens) matrix.
///
/// Entries in a torsion row of exponent f are kept reduced into [0, p^f);
/// entries in free rows are arbitrary elements of Z_(p). Equality is equality
/// of these canonical forms, i.e. congruence modulo the target torsion.
class PHom {
  public:
    PHom() = default;

    PHom(PGroup source, PGroup target, Matrix entries)
        : source_(std::move(source)), target_(std::move(target)), m_(std::move(entries)) {
        if (source_.prime() != target_.prime()) throw std::invalid_argument("PHom: prime mismatch");
        if (m_.rows() != target_.generators() || m_.cols() != source_.generators())
            throw std::invalid_argument("PHom: matrix shape does not match generator counts");
        if (!m_.is_integral(prime())) throw std::invalid_argument("PHom: entries must be p-integral");
        canonicalize();
    }

    static PHom zero(const PGroup& s, const PGroup& t) {
        return PHom(s, t, Matrix(t.generators(), s.generators()));
    }
    static PHom identity(const PGroup& g) { return PHom(g, g, Matrix::identity(g.generators())); }

    const PGroup& source() const { return source_; }
    const PGroup& target() const { return target_; }
    const Matrix& matrix() const { return m_; }
    long prime() const { return source_.prime(); }

    bool is_zero() const { return m_.is_zero(); }

    /// Well-definedness: an entry from an order-p^e source generator into an
    /// order-p^f target generator must be divisible by p^{max(f-e,0)}.
    /// Returns (row, col) of each offending entry.
    std::vector<std::pair<std::size_t, std::size_t>> compatibility_violations() const {
        std::vector<std::pair<std::size_t, std::size_t>> bad;
        for (std::size_t r = 0; r < m_.rows(); ++r) {
            const int f = target_.exponent(r);
            for (std::size_t c = 0; c < m_.cols(); ++c) {
                if (m_(r, c) == 0) continue;
                const int e = source_.exponent(c);
                if (e == kInfinity) continue;
                const int need = (f == kInfinity) ? kInfinity : std::max(f - e, 0);
                if (need == 0) continue;
                if (need == kInfinity || valuation(m_(r, c), prime()) < need) bad.emplace_back(r, c);
            }
        }
        return bad;
    }

    bool is_well_defined() const { return compatibility_violations().empty(); }

    /// this ∘ f
    PHom after(const PHom& f) const {
        if (!(f.target_ == source_)) throw std::invalid_argument("PHom::after: incompatible groups");
        return PHom(f.source_, target_, m_ * f.m_);
    }

    PHom operator+(const PHom& o) const {
        check_parallel(o);
        return PHom(source_, target_, m_ + o.m_);
    }
    PHom operator-(const PHom& o) const {
        check_parallel(o);
        return PHom(source_, target_, m_ - o.m_);
    }
    PHom scaled(const Scalar& s) const { return PHom(source_, target_, m_.scaled(s)); }

    /// Image of a coordinate vector (column) of the source.
    Matrix apply(const Matrix& v) const { return reduce_column(target_, m_ * v); }

    bool operator==(const PHom& o) const {
        return source_ == o.source_ && target_ == o.target_ && m_ == o.m_;
    }

    /// Reduce each torsion coordinate of the columns of v into [0, p^f).
    static Matrix reduce_column(const PGroup& g, Matrix v) {
        for (std::size_t r = static_cast<std::size_t>(g.rank()); r < v.rows(); ++r) {
            const int f = g.exponent(r);
            for (std::size_t c = 0; c < v.cols(); ++c) v(r, c) = Scalar(residue(v(r, c), g.prime(), f));
        }
        return v;
    }

  private:
    void canonicalize() { m_ = reduce_column(target_, std::move(m_)); }

    void check_parallel(const PHom& o) const {
        if (!(source_ == o.source_) || !(target_ == o.target_))
            throw std::invalid_argument("PHom: groups differ");
    }

    PGroup source_;
    PGroup target_;
    Matrix m_;
};

/// Direct sum of two PGroups with the permutation matrices relating bases.
/// The combined basis keeps the canonical order (free first, torsion
/// nonincreasing); ties keep summand a before summand b.
struct GroupSum {
    PGroup group;
    Matrix inject_a;   ///< group gens x a gens
    Matrix inject_b;   ///< group gens x b gens
    Matrix project_a;  ///< a gens x group gens
    Matrix project_b;  ///< b gens x group gens
};

inline GroupSum direct_sum(const PGroup& a, const PGroup& b) {
    if (a.prime() != b.prime()) throw std::invalid_argument("direct_sum: prime mismatch");
    struct Slot {
        int exponent;
        int which;  // 0 = a, 1 = b
        std::size_t index;
        std::string label;
    };
    std::vector<Slot> slots;
    for (std::size_t g = 0; g < a.generators(); ++g) slots.push_back({a.exponent(g), 0, g, a.label(g)});
    for (std::size_t g = 0; g < b.generators(); ++g) slots.push_back({b.exponent(g), 1, g, b.label(g)});
    std::stable_sort(slots.begin(), slots.end(),
                     [](const Slot& x, const Slot& y) { return x.exponent > y.exponent; });

    int rank = 0;
    std::vector<int> torsion;
    std::vector<std::string> labels;
    const bool keep_labels = !a.labels().empty() || !b.labels().empty();
    for (const auto& s : slots) {
        if (s.exponent == kInfinity)
            ++rank;
        else
            torsion.push_back(s.exponent);
        labels.push_back(s.label);
    }
    GroupSum out{PGroup(a.prime(), rank, torsion, keep_labels ? labels : std::vector<std::string>{}),
                 Matrix(slots.size(), a.generators()), Matrix(slots.size(), b.generators()),
                 Matrix(a.generators(), slots.size()), Matrix(b.generators(), slots.size())};
    for (std::size_t k = 0; k < slots.size(); ++k) {
        if (slots[k].which == 0) {
            out.inject_a(k, slots[k].index) = 1;
            out.project_a(slots[k].index, k) = 1;
        } else {
            out.inject_b(k, slots[k].index) = 1;
            out.project_b(slots[k].index, k) = 1;
        }
    }
    return out;
}

/// Block-diagonal map f (+) g between the direct sums of sources and targets.
inline PHom direct_sum(const PHom& f, const PHom& g) {
    const GroupSum s = direct_sum(f.source(), g.source());
    const GroupSum t = direct_sum(f.target(), g.target());
    Matrix m = t.inject_a * f.matrix() * s.project_a + t.inject_b * g.matrix() * s.project_b;
    return PHom(s.group, t.group, std::move(m));
}

}  // namespace fracture
