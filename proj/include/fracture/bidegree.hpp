#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracture {

/// Bidegree (i, j): topological degree i, motivic weight j.
///
/// Equivariantly, (i, j) indexes maps out of S^{(i-j) + j*sigma}; the sign
/// representation grading is never stored separately.
struct BiDegree {
    int i = 0;
    int j = 0;

    constexpr BiDegree() = default;
    constexpr BiDegree(int i_, int j_) : i(i_), j(j_) {}

    constexpr BiDegree operator+(BiDegree o) const { return {i + o.i, j + o.j}; }
    constexpr BiDegree operator-(BiDegree o) const { return {i - o.i, j - o.j}; }
    constexpr BiDegree operator-() const { return {-i, -j}; }
    constexpr BiDegree operator*(int k) const { return {i * k, j * k}; }
    constexpr BiDegree& operator+=(BiDegree o) {
        i += o.i;
        j += o.j;
        return *this;
    }

    constexpr bool is_zero() const { return i == 0 && j == 0; }

    constexpr auto operator<=>(const BiDegree&) const = default;
};

constexpr BiDegree operator*(int k, BiDegree d) { return d * k; }

inline std::ostream& operator<<(std::ostream& os, BiDegree d) {
    return os << '(' << d.i << ',' << d.j << ')';
}

inline std::string to_string(BiDegree d) {
    return "(" + std::to_string(d.i) + "," + std::to_string(d.j) + ")";
}

/// Closed rectangle [imin, imax] x [jmin, jmax] of bidegrees.
struct Window {
    int imin = 0;
    int imax = -1;
    int jmin = 0;
    int jmax = -1;

    constexpr Window() = default;
    constexpr Window(int imin_, int imax_, int jmin_, int jmax_)
        : imin(imin_), imax(imax_), jmin(jmin_), jmax(jmax_) {}

    /// Square window [lo, hi]^2.
    static constexpr Window square(int lo, int hi) { return {lo, hi, lo, hi}; }

    constexpr bool empty() const { return imin > imax || jmin > jmax; }
    constexpr int width() const { return empty() ? 0 : imax - imin + 1; }
    constexpr int height() const { return empty() ? 0 : jmax - jmin + 1; }
    constexpr std::int64_t cell_count() const {
        return static_cast<std::int64_t>(width()) * height();
    }
    constexpr int diameter() const { return std::max(width(), height()); }

    constexpr bool contains(BiDegree d) const {
        return d.i >= imin && d.i <= imax && d.j >= jmin && d.j <= jmax;
    }
    constexpr bool contains(const Window& w) const {
        return w.empty() || (w.imin >= imin && w.imax <= imax && w.jmin >= jmin && w.jmax <= jmax);
    }

    /// Largest k in [0, cap] such that d, d+step, ..., d+k*step all lie in the window,
    /// or -1 when d itself is outside.
    constexpr int ray_length(BiDegree d, BiDegree step, int cap) const {
        if (!contains(d)) return -1;
        int k = 0;
        while (k < cap && contains(d + step * (k + 1))) ++k;
        return k;
    }

    /// Cells in (i, j) lexicographic order.
    std::vector<BiDegree> cells() const {
        std::vector<BiDegree> out;
        if (empty()) return out;
        out.reserve(static_cast<std::size_t>(cell_count()));
        for (int i = imin; i <= imax; ++i)
            for (int j = jmin; j <= jmax; ++j) out.emplace_back(i, j);
        return out;
    }

    Window grown(int left, int right, int down, int up) const {
        return {imin - left, imax + right, jmin - down, jmax + up};
    }

    constexpr bool operator==(const Window&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const Window& w) {
    return os << '[' << w.imin << ',' << w.imax << "]x[" << w.jmin << ',' << w.jmax << ']';
}

inline std::string to_string(const Window& w) {
    std::ostringstream os;
    os << w;
    return os.str();
}

/// A named element acting on a bigraded module by shifting degree.
struct Multiplier {
    std::string name;
    BiDegree degree;

    bool operator==(const Multiplier&) const = default;
    auto operator<=>(const Multiplier&) const = default;
};

/// Conventional degrees of the named multipliers; nullopt-like sentinel is
/// signalled by returning false.
inline bool standard_degree(const std::string& name, BiDegree& out) {
    struct Entry {
        const char* name;
        BiDegree degree;
    };
    static constexpr Entry table[] = {
        {"rho", {-1, -1}}, {"tau", {0, -1}}, {"tau2", {0, -2}}, {"tau4", {0, -4}}, {"tau2^2", {0, -4}},
        {"v1", {2, 1}},    {"a", {-1, -1}},  {"u", {0, -1}},    {"u2", {0, -2}},
    };
    for (const auto& e : table) {
        if (name == e.name) {
            out = e.degree;
            return true;
        }
    }
    return false;
}

namespace mult {
inline Multiplier rho() { return {"rho", {-1, -1}}; }
inline Multiplier tau() { return {"tau", {0, -1}}; }
inline Multiplier tau2() { return {"tau2", {0, -2}}; }
inline Multiplier v1() { return {"v1", {2, 1}}; }
/// Multiplication by the prime itself; degree (0,0), never stored.
inline Multiplier scalar(long p) { return {std::to_string(p), {0, 0}}; }
}  // namespace mult

}  // namespace fracture
