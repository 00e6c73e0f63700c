#pragma once

// JSON dump of modules and assembly reports, and ASCII/SVG charts.
//
// Chart conventions: horizontal axis i, vertical axis j; a dot is a summand
// F_p, a box is Z_p, a numeral e is Z/p^e; rho edges are solid, v1 edges dashed.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracture/assembler.hpp"

namespace fracture {

using Json = nlohmann::json;

class ChartError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Json scalar_to_json(const Scalar& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return Json(q.get_num().get_si());
    return Json(q.get_str());
}

inline Scalar scalar_from_json(const Json& v) {
    if (v.is_number_integer()) return Scalar(static_cast<long>(v.get<std::int64_t>()));
    if (v.is_string()) {
        Scalar q;
        if (q.set_str(v.get<std::string>(), 10) != 0) throw std::invalid_argument("bad matrix entry " + v.dump());
        q.canonicalize();
        return q;
    }
    throw std::invalid_argument("bad matrix entry " + v.dump());
}

inline Json group_json(const PGroup& g) { return Json{{"rank", g.rank()}, {"torsion", g.torsion()}}; }

inline Json window_json(const Window& w) {
    return Json{{"imin", w.imin}, {"imax", w.imax}, {"jmin", w.jmin}, {"jmax", w.jmax}};
}

}  // namespace detail

/// Canonical JSON document. Cells are the nonzero cells in (i, j) order;
/// edges are the nonzero actions ordered by source cell, then multiplier.
inline Json module_json(const BigradedModule& m, const std::map<BiDegree, CellProvenance>* provenance = nullptr) {
    Json doc;
    doc["prime"] = m.prime();
    doc["window"] = detail::window_json(m.window());
    Json xs = Json::array();
    for (const auto& x : m.multipliers()) xs.push_back(Json{{"name", x.name}, {"degree", {x.degree.i, x.degree.j}}});
    doc["multipliers"] = xs;

    Json cells = Json::array();
    for (const auto& [d, g] : m.cells()) {
        Json c{{"i", d.i}, {"j", d.j}, {"rank", g.rank()}, {"torsion", g.torsion()}, {"flags", m.flags(d).names()}};
        if (provenance) {
            if (auto it = provenance->find(d); it != provenance->end()) {
                c["provenance"] = Json{{"ker", detail::group_json(it->second.ker_part)},
                                       {"coker", detail::group_json(it->second.coker_part)},
                                       {"status", it->second.status == ExtensionStatus::split ? "split" : "ambiguous"},
                                       {"certified", it->second.certified}};
            }
        }
        cells.push_back(std::move(c));
    }
    doc["cells"] = cells;

    std::vector<std::pair<BiDegree, std::string>> keys;
    for (const auto& [key, f] : m.actions()) keys.emplace_back(key.second, key.first);
    std::sort(keys.begin(), keys.end());
    Json edges = Json::array();
    for (const auto& [d, name] : keys) {
        const PHom& f = m.actions().at({name, d});
        const BiDegree e = d + m.multiplier(name)->degree;
        Json rows = Json::array();
        for (std::size_t r = 0; r < f.matrix().rows(); ++r) {
            Json row = Json::array();
            for (std::size_t c = 0; c < f.matrix().cols(); ++c) row.push_back(detail::scalar_to_json(f.matrix()(r, c)));
            rows.push_back(row);
        }
        edges.push_back(Json{{"from", {d.i, d.j}}, {"to", {e.i, e.j}}, {"mult", name}, {"matrix", rows}});
    }
    doc["edges"] = edges;
    return doc;
}

inline std::string emit_json(const BigradedModule& m, bool pretty = true) {
    const Json doc = module_json(m);
    return pretty ? doc.dump(2) + "\n" : doc.dump();
}

inline std::string emit_json(const AssemblyReport& rep, bool with_provenance = true, bool pretty = true) {
    const Json doc = module_json(rep.result, with_provenance ? &rep.provenance : nullptr);
    return pretty ? doc.dump(2) + "\n" : doc.dump();
}

/// Inverse of module_json (provenance is ignored). Multipliers missing from
/// the "multipliers" list are taken from the standard degree table.
inline BigradedModule module_from_json(const Json& doc) {
    try {
        const long p = doc.at("prime").get<long>();
        const Json& w = doc.at("window");
        const Window win{w.at("imin").get<int>(), w.at("imax").get<int>(), w.at("jmin").get<int>(), w.at("jmax").get<int>()};
        if (win.empty()) throw std::invalid_argument("empty window");
        ModuleBuilder b(p, win);
        if (doc.contains("multipliers"))
            for (const auto& x : doc.at("multipliers"))
                b.add_multiplier({x.at("name").get<std::string>(), {x.at("degree").at(0).get<int>(), x.at("degree").at(1).get<int>()}});
        for (const auto& c : doc.at("cells")) {
            const BiDegree d{c.at("i").get<int>(), c.at("j").get<int>()};
            b.set_cell(d, PGroup(p, c.at("rank").get<int>(), c.at("torsion").get<std::vector<int>>()));
            if (c.contains("flags"))
                for (const auto& name : c.at("flags")) {
                    auto f = CellFlags::from_name(name.get<std::string>());
                    if (!f) throw std::invalid_argument("unknown flag " + name.dump());
                    b.flag(d, *f);
                }
        }
        if (doc.contains("edges"))
            for (const auto& e : doc.at("edges")) {
                const std::string name = e.at("mult").get<std::string>();
                const BiDegree d{e.at("from").at(0).get<int>(), e.at("from").at(1).get<int>()};
                Multiplier x{name, {}};
                if (!standard_degree(name, x.degree)) {
                    if (!e.contains("to")) throw std::invalid_argument("multiplier " + name + " has no known degree");
                    x.degree = BiDegree{e.at("to").at(0).get<int>(), e.at("to").at(1).get<int>()} - d;
                }
                b.add_multiplier(x);
                const PGroup src = b.cell(d);
                const PGroup tgt = b.cell(d + x.degree);
                const Json& rows = e.at("matrix");
                Matrix m(tgt.generators(), src.generators());
                if (rows.size() != m.rows()) throw std::invalid_argument("edge matrix has the wrong number of rows");
                for (std::size_t r = 0; r < m.rows(); ++r) {
                    if (rows[r].size() != m.cols()) throw std::invalid_argument("edge matrix has the wrong number of columns");
                    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = detail::scalar_from_json(rows[r][c]);
                }
                b.set_action(name, d, PHom(src, tgt, std::move(m)));
            }
        return b.build();
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("malformed module JSON: ") + e.what());
    }
}

inline BigradedModule module_from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed module JSON: ") + e.what());
    }
    return module_from_json(doc);
}

struct ChartSpec {
    Window window;
    std::set<BiDegree> shaded;  ///< cells to shade (e.g. support of the motivic input)
    bool axes = true;
    int max_ascii_columns = 400;
    int unit = 24;  ///< SVG pixels per lattice step
};

enum class ChartFormat { ascii, svg };

namespace detail {

/// Glyph string for one cell: up to three glyphs, else the summand count.
inline std::string cell_glyphs(const PGroup& g) {
    if (g.is_zero()) return {};
    if (g.generators() > 3) return std::to_string(g.generators());
    std::string out;
    for (int r = 0; r < g.rank(); ++r) out += "\xE2\x96\xA1";
    for (int e : g.torsion()) out += e == 1 ? std::string("\xC2\xB7") : (e <= 9 ? std::to_string(e) : std::string("+"));
    return out;
}

inline std::size_t display_width(const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

inline std::string pad_left(const std::string& s, std::size_t width) {
    const std::size_t w = display_width(s);
    return w >= width ? s : std::string(width - w, ' ') + s;
}

inline std::string render_ascii(const BigradedModule& m, const ChartSpec& spec) {
    const Window& w = spec.window;
    constexpr std::size_t slot = 4;
    std::size_t label = 2;
    for (int j : {w.jmin, w.jmax}) label = std::max(label, std::to_string(j).size());
    for (int i : {w.imin, w.imax}) label = std::max(label, std::to_string(i).size() + 1);
    const std::size_t columns = label + 2 + slot * static_cast<std::size_t>(w.width());
    if (columns > static_cast<std::size_t>(spec.max_ascii_columns))
        throw ChartError("ASCII canvas of " + std::to_string(columns) + " columns exceeds the limit of " +
                         std::to_string(spec.max_ascii_columns));
    std::ostringstream os;
    for (int j = w.jmax; j >= w.jmin; --j) {
        std::string line = pad_left(std::to_string(j), label) + (spec.axes ? " |" : "  ");
        for (int i = w.imin; i <= w.imax; ++i) {
            const BiDegree d{i, j};
            std::string g = m.window().contains(d) ? cell_glyphs(m.cell(d)) : std::string{};
            if (g.empty() && spec.shaded.count(d)) g = ":";
            line += pad_left(g, slot);
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
    }
    if (spec.axes) {
        os << std::string(label + 1, ' ') << '+' << std::string(slot * static_cast<std::size_t>(w.width()), '-') << '\n';
        std::string labels(label + 2, ' ');
        for (int i = w.imin; i <= w.imax; ++i) labels += pad_left(std::to_string(i), slot);
        os << labels << '\n';
        os << std::string(label + 2, ' ') << "i ->  (j upward)\n";
    }
    return os.str();
}

inline std::string render_svg(const BigradedModule& m, const ChartSpec& spec) {
    const Window& w = spec.window;
    const int u = spec.unit;
    const int margin = 2 * u;
    const int width = (w.width() - 1) * u + 2 * margin;
    const int height = (w.height() - 1) * u + 2 * margin;
    auto x_of = [&](int i) { return margin + (i - w.imin) * u; };
    auto y_of = [&](int j) { return margin + (w.jmax - j) * u; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    for (const BiDegree d : spec.shaded) {
        if (!w.contains(d)) continue;
        os << "<rect class=\"shade\" x=\"" << x_of(d.i) - u / 2 << "\" y=\"" << y_of(d.j) - u / 2 << "\" width=\"" << u
           << "\" height=\"" << u << "\" fill=\"#e6e6e6\"/>\n";
    }

    if (spec.axes) {
        os << "<g class=\"axes\" stroke=\"#999999\" stroke-width=\"1\">\n";
        if (w.jmin <= 0 && 0 <= w.jmax)
            os << "<line x1=\"" << x_of(w.imin) << "\" y1=\"" << y_of(0) << "\" x2=\"" << x_of(w.imax) << "\" y2=\"" << y_of(0) << "\"/>\n";
        if (w.imin <= 0 && 0 <= w.imax)
            os << "<line x1=\"" << x_of(0) << "\" y1=\"" << y_of(w.jmin) << "\" x2=\"" << x_of(0) << "\" y2=\"" << y_of(w.jmax) << "\"/>\n";
        os << "</g>\n<g class=\"labels\" font-family=\"monospace\" font-size=\"10\" fill=\"#555555\" text-anchor=\"middle\">\n";
        for (int i = w.imin; i <= w.imax; ++i)
            os << "<text x=\"" << x_of(i) << "\" y=\"" << y_of(w.jmin) + u << "\">" << i << "</text>\n";
        for (int j = w.jmin; j <= w.jmax; ++j)
            os << "<text x=\"" << x_of(w.imin) - u << "\" y=\"" << y_of(j) + 4 << "\">" << j << "</text>\n";
        os << "</g>\n";
    }

    os << "<g class=\"edges\" stroke=\"black\" stroke-width=\"1.5\">\n";
    for (const auto& [key, f] : m.actions()) {
        const auto& [name, d] = key;
        const bool dashed = name == "v1";
        if (name != "rho" && !dashed) continue;
        const BiDegree e = d + m.multiplier(name)->degree;
        if (!w.contains(d) || !w.contains(e) || f.is_zero()) continue;
        os << "<line x1=\"" << x_of(d.i) << "\" y1=\"" << y_of(d.j) << "\" x2=\"" << x_of(e.i) << "\" y2=\"" << y_of(e.j) << '"'
           << (dashed ? " stroke-dasharray=\"3,3\" class=\"v1\"" : " class=\"rho\"") << "/>\n";
    }
    os << "</g>\n<g class=\"glyphs\">\n";
    for (const auto& [d, g] : m.cells()) {
        if (!w.contains(d)) continue;
        const int cx = x_of(d.i), cy = y_of(d.j);
        if (g.generators() > 3) {
            os << "<text x=\"" << cx << "\" y=\"" << cy + 4 << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">"
               << g.generators() << "</text>\n";
            continue;
        }
        const int n = static_cast<int>(g.generators());
        for (int k = 0; k < n; ++k) {
            const int x = cx + (2 * k - (n - 1)) * 4;
            const int e = g.exponent(static_cast<std::size_t>(k));
            if (e == kInfinity)
                os << "<rect x=\"" << x - 4 << "\" y=\"" << cy - 4 << "\" width=\"8\" height=\"8\" fill=\"white\" stroke=\"black\"/>\n";
            else if (e == 1)
                os << "<circle cx=\"" << x << "\" cy=\"" << cy << "\" r=\"3\" fill=\"black\"/>\n";
            else
                os << "<text x=\"" << x << "\" y=\"" << cy + 4 << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">"
                   << e << "</text>\n";
        }
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace detail

inline std::string render(const BigradedModule& m, const ChartSpec& spec, ChartFormat format) {
    if (spec.window.empty()) throw ChartError("empty chart window");
    return format == ChartFormat::ascii ? detail::render_ascii(m, spec) : detail::render_svg(m, spec);
}

inline std::string render(const BigradedModule& m, ChartFormat format) {
    ChartSpec spec;
    spec.window = m.window();
    return render(m, spec, format);
}

}  // namespace fracture
