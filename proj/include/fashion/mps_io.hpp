#pragma once

// MPS and CPLEX-LP emission plus an MPS reader for round-trip checks and
// external-solver hand-off. Row and column names are mangled to 8 characters
// deterministically (R/C + 7-digit index); the sidecar map restores the
// original names on re-parse. Values are printed with 17 significant digits
// so coefficients survive the round trip bit-exactly; fields are
// whitespace-aligned which any free-format MPS reader accepts.

#include <cstdio>
#include <map>
#include <sstream>
#include <string>

#include "fashion/json_io.hpp"
#include "fashion/milp.hpp"

namespace fashion {

struct MpsExport {
    std::string text;
    Json name_map; // {"rows": {mangled: original}, "columns": {...}}
};

namespace detail {

inline std::string mps_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string mangled_row(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "R%07d", i);
    return buf;
}
inline std::string mangled_col(int j) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "C%07d", j);
    return buf;
}

inline void mps_field_line(std::ostringstream& os, const std::string& f1, const std::string& f2,
                           const std::string& f3, const std::string& f4 = "",
                           const std::string& f5 = "") {
    os << "    " << f1;
    for (std::size_t pad = f1.size(); pad < 10; ++pad) os << ' ';
    os << f2;
    for (std::size_t pad = f2.size(); pad < 10; ++pad) os << ' ';
    os << f3;
    if (!f4.empty()) {
        for (std::size_t pad = f3.size(); pad < 24; ++pad) os << ' ';
        os << f4;
        for (std::size_t pad = f4.size(); pad < 10; ++pad) os << ' ';
        os << f5;
    }
    os << '\n';
}

} // namespace detail

inline MpsExport export_mps(const MilpProblem& p, const std::string& name = "FASHION") {
    std::ostringstream os;
    Json rows_map = Json::object(), cols_map = Json::object();
    os << "NAME          " << name << '\n';
    os << "ROWS\n";
    os << " N  COST\n";
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        const Row& r = p.rows[i];
        char sense = r.sense == RowSense::LE ? 'L' : r.sense == RowSense::GE ? 'G' : 'E';
        std::string mr = detail::mangled_row(static_cast<int>(i));
        os << ' ' << sense << "  " << mr << '\n';
        rows_map[mr] = r.name;
    }

    // column-major coefficient lists
    std::vector<std::vector<std::pair<int, double>>> cols(p.cols.size());
    for (std::size_t i = 0; i < p.rows.size(); ++i)
        for (auto [j, a] : p.rows[i].coeffs)
            cols[static_cast<std::size_t>(j)].emplace_back(static_cast<int>(i), a);

    os << "COLUMNS\n";
    bool integer_open = false;
    int marker = 0;
    for (std::size_t j = 0; j < p.cols.size(); ++j) {
        const Column& c = p.cols[j];
        std::string mc = detail::mangled_col(static_cast<int>(j));
        cols_map[mc] = c.name;
        if ((c.kind == ColKind::Binary) != integer_open) {
            char mbuf[16];
            std::snprintf(mbuf, sizeof(mbuf), "M%07d", marker++);
            detail::mps_field_line(os, mbuf, "'MARKER'",
                                   integer_open ? "'INTEND'" : "'INTORG'");
            integer_open = !integer_open;
        }
        bool emitted = false;
        if (c.objective != 0.0) {
            detail::mps_field_line(os, mc, "COST", detail::mps_number(c.objective));
            emitted = true;
        }
        for (auto [i, a] : cols[j]) {
            detail::mps_field_line(os, mc, detail::mangled_row(i), detail::mps_number(a));
            emitted = true;
        }
        if (!emitted) detail::mps_field_line(os, mc, "COST", "0");
    }
    if (integer_open) {
        char mbuf[16];
        std::snprintf(mbuf, sizeof(mbuf), "M%07d", marker++);
        detail::mps_field_line(os, mbuf, "'MARKER'", "'INTEND'");
    }

    os << "RHS\n";
    for (std::size_t i = 0; i < p.rows.size(); ++i)
        if (p.rows[i].rhs != 0.0)
            detail::mps_field_line(os, "RHS", detail::mangled_row(static_cast<int>(i)),
                                   detail::mps_number(p.rows[i].rhs));
    if (p.objective_offset != 0.0)
        detail::mps_field_line(os, "RHS", "COST", detail::mps_number(-p.objective_offset));

    os << "BOUNDS\n";
    for (std::size_t j = 0; j < p.cols.size(); ++j) {
        const Column& c = p.cols[j];
        std::string mc = detail::mangled_col(static_cast<int>(j));
        auto bnd = [&](const char* kind, double v, bool with_value) {
            os << ' ' << kind << ' ';
            os << "BND";
            os << "       ";
            os << mc;
            if (with_value) {
                for (std::size_t pad = mc.size(); pad < 10; ++pad) os << ' ';
                os << detail::mps_number(v);
            }
            os << '\n';
        };
        if (c.kind == ColKind::Binary && c.lower == 0.0 && c.upper == 1.0) {
            bnd("BV", 0.0, false);
            continue;
        }
        if (c.lower == c.upper) {
            bnd("FX", c.lower, true);
            continue;
        }
        if (c.lower == -kInfinity && c.upper == kInfinity) {
            bnd("FR", 0.0, false);
            continue;
        }
        if (c.lower == -kInfinity) bnd("MI", 0.0, false);
        else if (c.lower != 0.0) bnd("LO", c.lower, true);
        if (c.upper != kInfinity) bnd("UP", c.upper, true);
    }
    os << "ENDATA\n";

    MpsExport out;
    out.text = os.str();
    out.name_map = Json::object();
    out.name_map["rows"] = rows_map;
    out.name_map["columns"] = cols_map;
    return out;
}

inline MilpProblem parse_mps(const std::string& text, const Json* name_map = nullptr) {
    MilpProblem p;
    std::map<std::string, int> row_of, col_of;
    std::vector<RowSense> senses;
    std::vector<std::string> row_names;
    enum Section { None, Rows, Columns, Rhs, Ranges, Bounds, Done } section = None;
    bool integer_open = false;
    std::string objective_row;

    std::istringstream in(text);
    std::string line;
    auto tokens_of = [](const std::string& l) {
        std::istringstream ls(l);
        std::vector<std::string> t;
        std::string w;
        while (ls >> w) t.push_back(w);
        return t;
    };

    struct PendingRow {
        std::string name;
        RowSense sense;
        double rhs = 0.0;
        std::vector<std::pair<int, double>> coeffs;
    };
    std::vector<PendingRow> rows;

    auto ensure_col = [&](const std::string& nm) {
        auto it = col_of.find(nm);
        if (it != col_of.end()) return it->second;
        int j = p.add_column(nm, integer_open ? ColKind::Binary : ColKind::Continuous,
                             integer_open ? 0.0 : 0.0, integer_open ? 1.0 : kInfinity, 0.0);
        col_of[nm] = j;
        return j;
    };

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        bool indented = line[0] == ' ' || line[0] == '\t';
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        if (!indented || toks[0] == "NAME") {
            const std::string& kw = toks[0];
            if (kw == "NAME") continue;
            if (kw == "ROWS") { section = Rows; continue; }
            if (kw == "COLUMNS") { section = Columns; continue; }
            if (kw == "RHS") { section = Rhs; continue; }
            if (kw == "RANGES") { section = Ranges; continue; }
            if (kw == "BOUNDS") { section = Bounds; continue; }
            if (kw == "ENDATA") { section = Done; break; }
            throw MilpError("unknown MPS section: " + kw);
        }
        switch (section) {
            case Rows: {
                if (toks.size() < 2) throw MilpError("bad ROWS line");
                if (toks[0] == "N") {
                    if (objective_row.empty()) objective_row = toks[1];
                    continue;
                }
                RowSense s = toks[0] == "L"   ? RowSense::LE
                             : toks[0] == "G" ? RowSense::GE
                                              : RowSense::EQ;
                row_of[toks[1]] = static_cast<int>(rows.size());
                rows.push_back({toks[1], s, 0.0, {}});
                break;
            }
            case Columns: {
                if (toks.size() >= 3 && toks[1] == "'MARKER'") {
                    if (toks[2] == "'INTORG'") integer_open = true;
                    else if (toks[2] == "'INTEND'") integer_open = false;
                    continue;
                }
                int j = ensure_col(toks[0]);
                for (std::size_t t = 1; t + 1 < toks.size(); t += 2) {
                    double v = std::stod(toks[t + 1]);
                    if (toks[t] == objective_row) {
                        p.cols[static_cast<std::size_t>(j)].objective = v;
                    } else {
                        auto it = row_of.find(toks[t]);
                        if (it == row_of.end()) throw MilpError("unknown row " + toks[t]);
                        rows[static_cast<std::size_t>(it->second)].coeffs.emplace_back(j, v);
                    }
                }
                break;
            }
            case Rhs: {
                for (std::size_t t = 1; t + 1 < toks.size(); t += 2) {
                    double v = std::stod(toks[t + 1]);
                    if (toks[t] == objective_row) {
                        p.objective_offset = -v;
                    } else {
                        auto it = row_of.find(toks[t]);
                        if (it == row_of.end()) throw MilpError("unknown rhs row " + toks[t]);
                        rows[static_cast<std::size_t>(it->second)].rhs = v;
                    }
                }
                break;
            }
            case Ranges:
                throw MilpError("RANGES section not supported");
            case Bounds: {
                if (toks.size() < 3) throw MilpError("bad BOUNDS line");
                const std::string& kind = toks[0];
                auto it = col_of.find(toks[2]);
                if (it == col_of.end()) throw MilpError("bound on unknown column " + toks[2]);
                Column& c = p.cols[static_cast<std::size_t>(it->second)];
                double v = toks.size() >= 4 ? std::stod(toks[3]) : 0.0;
                if (kind == "UP") c.upper = v;
                else if (kind == "LO") c.lower = v;
                else if (kind == "FX") { c.lower = v; c.upper = v; }
                else if (kind == "FR") { c.lower = -kInfinity; c.upper = kInfinity; }
                else if (kind == "MI") c.lower = -kInfinity;
                else if (kind == "PL") c.upper = kInfinity;
                else if (kind == "BV") { c.kind = ColKind::Binary; c.lower = 0.0; c.upper = 1.0; }
                else throw MilpError("unknown bound kind " + kind);
                break;
            }
            default:
                throw MilpError("data line outside any MPS section");
        }
    }

    for (PendingRow& r : rows) p.add_row(r.name, r.sense, r.rhs, std::move(r.coeffs));
    if (name_map) {
        const Json& rm = name_map->at("rows");
        const Json& cm = name_map->at("columns");
        for (Row& r : p.rows)
            if (rm.contains(r.name)) r.name = rm.at(r.name).get<std::string>();
        for (Column& c : p.cols)
            if (cm.contains(c.name)) c.name = cm.at(c.name).get<std::string>();
    }
    p.validate();
    return p;
}

// CPLEX-LP text; same mangled names as the MPS export.
inline std::string export_lp(const MilpProblem& p) {
    std::ostringstream os;
    os << "\\ generated model\n";
    os << "Minimize\n obj:";
    bool first = true;
    for (std::size_t j = 0; j < p.cols.size(); ++j) {
        double c = p.cols[j].objective;
        if (c == 0.0) continue;
        os << (c < 0 ? " - " : first ? " " : " + ")
           << detail::mps_number(std::abs(c)) << ' ' << detail::mangled_col(static_cast<int>(j));
        first = false;
    }
    if (first) os << " 0 " << detail::mangled_col(0);
    os << "\nSubject To\n";
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        const Row& r = p.rows[i];
        os << ' ' << detail::mangled_row(static_cast<int>(i)) << ':';
        bool f2 = true;
        for (auto [j, a] : r.coeffs) {
            os << (a < 0 ? " - " : f2 ? " " : " + ") << detail::mps_number(std::abs(a)) << ' '
               << detail::mangled_col(j);
            f2 = false;
        }
        os << (r.sense == RowSense::LE ? " <= " : r.sense == RowSense::GE ? " >= " : " = ")
           << detail::mps_number(r.rhs) << '\n';
    }
    os << "Bounds\n";
    for (std::size_t j = 0; j < p.cols.size(); ++j) {
        const Column& c = p.cols[j];
        std::string nm = detail::mangled_col(static_cast<int>(j));
        if (c.lower == -kInfinity && c.upper == kInfinity) os << ' ' << nm << " free\n";
        else if (c.lower == c.upper)
            os << ' ' << nm << " = " << detail::mps_number(c.lower) << '\n';
        else {
            os << ' ';
            if (c.lower == -kInfinity) os << "-inf";
            else os << detail::mps_number(c.lower);
            os << " <= " << nm << " <= ";
            if (c.upper == kInfinity) os << "+inf";
            else os << detail::mps_number(c.upper);
            os << '\n';
        }
    }
    bool any_bin = false;
    for (const Column& c : p.cols) any_bin |= c.kind == ColKind::Binary;
    if (any_bin) {
        os << "Binaries\n";
        int on_line = 0;
        for (std::size_t j = 0; j < p.cols.size(); ++j) {
            if (p.cols[j].kind != ColKind::Binary) continue;
            os << ' ' << detail::mangled_col(static_cast<int>(j));
            if (++on_line % 8 == 0) os << '\n';
        }
        if (on_line % 8 != 0) os << '\n';
    }
    os << "End\n";
    return os.str();
}

} // namespace fashion
