#pragma once

// Modules with a monomial basis: every basis element is a cyclic summand
// p^a * m of some ambient monomial m, and every multiplier sends a monomial to
// at most one other monomial. Both the expanded presentations and the
// hard-coded equivariant answers are of this shape.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracture/module.hpp"

namespace fracture {

struct BasisElement {
    std::vector<int> key;       ///< ambient exponent vector (or any identifying tuple)
    BiDegree degree;
    int exponent = kInfinity;   ///< summand Z/p^exponent, kInfinity for Z_p
    int coefficient_power = 0;  ///< the element is p^coefficient_power * key in the ambient ring
    std::string label;
};

/// key -> (target key) for multiplier index k; nullopt means the product is zero.
using MonomialShift = std::function<std::optional<std::vector<int>>(std::size_t, const std::vector<int>&)>;

inline BigradedModule build_monomial_module(long prime, const Window& window, const std::vector<Multiplier>& multipliers,
                                            std::vector<BasisElement> elements, const MonomialShift& shift) {
    std::map<BiDegree, std::vector<BasisElement>> by_cell;
    for (auto& e : elements) {
        if (!window.contains(e.degree)) continue;
        by_cell[e.degree].push_back(std::move(e));
    }
    ModuleBuilder b(prime, window, multipliers);

    // Position of each key inside its cell's basis.
    std::map<std::vector<int>, std::pair<BiDegree, std::size_t>> where;
    for (auto& [d, elems] : by_cell) {
        std::sort(elems.begin(), elems.end(), [](const BasisElement& x, const BasisElement& y) {
            if (x.exponent != y.exponent) return x.exponent > y.exponent;
            return x.key < y.key;
        });
        int rank = 0;
        std::vector<int> torsion;
        std::vector<std::string> labels;
        for (std::size_t k = 0; k < elems.size(); ++k) {
            if (elems[k].exponent == kInfinity)
                ++rank;
            else
                torsion.push_back(elems[k].exponent);
            labels.push_back(elems[k].label);
            where[elems[k].key] = {d, k};
        }
        b.set_cell(d, PGroup(prime, rank, torsion, labels));
    }

    for (std::size_t xi = 0; xi < multipliers.size(); ++xi) {
        const Multiplier& x = multipliers[xi];
        for (const auto& [d, elems] : by_cell) {
            const BiDegree e = d + x.degree;
            if (!window.contains(e)) continue;
            const PGroup src = b.cell(d);
            const PGroup tgt = b.cell(e);
            if (tgt.is_zero()) continue;
            Matrix m(tgt.generators(), src.generators());
            for (std::size_t c = 0; c < elems.size(); ++c) {
                auto to = shift(xi, elems[c].key);
                if (!to) continue;
                auto it = where.find(*to);
                if (it == where.end() || it->second.first != e) continue;
                const BasisElement& t = by_cell.at(e)[it->second.second];
                const int gap = elems[c].coefficient_power - t.coefficient_power;
                if (gap < 0)
                    throw std::logic_error("monomial module is not closed under " + x.name + " at " + to_string(d));
                m(it->second.second, c) = Scalar(prime_power(prime, gap));
            }
            b.set_action(x.name, d, PHom(src, tgt, std::move(m)));
        }
    }
    return b.build();
}

}  // namespace fracture
