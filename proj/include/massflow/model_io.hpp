#pragma once

// Text formats for models: fixed-form MPS and CPLEX-style LP, writer and
// reader for each. Writers are canonical (a pure function of the model's
// mathematical content), numeric fields carry at most 12 significant digits,
// and export -> import -> export reproduces the first export byte for byte.
// Readers accept the dialect the writers emit plus the common variations
// (multiple entries per MPS line, comments, flexible whitespace).

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "massflow/energy.hpp"
#include "massflow/milp.hpp"

namespace massflow {

namespace detail {

inline std::string fmt_num(double v, const char* spec = "%.12g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline bool integral_kind(VarKind k) { return k != VarKind::Continuous; }

// Column-major view: objective entry first, then constraint entries by row.
struct ColEntries {
    double obj = 0.0;
    std::vector<std::pair<int, double>> rows;
};

inline std::vector<ColEntries> column_view(const MilpModel& m) {
    std::vector<ColEntries> cols(m.var_count());
    for (int c = 0; c < m.var_count(); ++c) cols[c].obj = m.obj[c];
    for (int r = 0; r < m.con_count(); ++r) {
        std::map<int, double> merged;
        for (const LinTerm& t : m.cons[r].terms) merged[t.col] += t.coef;
        for (const auto& [c, a] : merged) cols[c].rows.push_back({r, a});
    }
    for (auto& ce : cols)
        std::sort(ce.rows.begin(), ce.rows.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    return cols;
}

inline std::string pad_field(const std::string& s, size_t width) {
    std::string out = s;
    if (out.size() < width) out.append(width - out.size(), ' ');
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// MPS
// ---------------------------------------------------------------------------

inline std::string export_mps(const MilpModel& m, const std::string& name = "MASSFLOW") {
    for (const Variable& v : m.vars)
        if (v.name.size() > 8)
            throw std::runtime_error("export_mps: variable name exceeds field width: " + v.name);
    for (const Constraint& c : m.cons)
        if (c.name.size() > 8)
            throw std::runtime_error("export_mps: row name exceeds field width: " + c.name);

    const auto cols = detail::column_view(m);
    std::ostringstream os;
    os << "NAME          " << name << "\n";
    os << "ROWS\n";
    os << " N  COST\n";
    for (const Constraint& c : m.cons) {
        const char rel = c.rel == Relation::LessEq ? 'L' : c.rel == Relation::Equal ? 'E' : 'G';
        os << " " << rel << "  " << c.name << "\n";
    }
    os << "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    auto emit_entry = [&os](const std::string& col, const std::string& row, double v) {
        os << "    " << detail::pad_field(col, 10) << detail::pad_field(row, 10)
           << detail::fmt_num(v) << "\n";
    };
    for (int c = 0; c < m.var_count(); ++c) {
        const bool wants_int = detail::integral_kind(m.vars[c].kind);
        if (wants_int != in_int) {
            char mk[16];
            std::snprintf(mk, sizeof mk, "MK%04d", marker++);
            os << "    " << detail::pad_field(mk, 10) << detail::pad_field("'MARKER'", 25)
               << (wants_int ? "'INTORG'" : "'INTEND'") << "\n";
            in_int = wants_int;
        }
        const auto& ce = cols[c];
        if (ce.obj != 0.0 || ce.rows.empty()) emit_entry(m.vars[c].name, "COST", ce.obj);
        for (const auto& [r, a] : ce.rows) emit_entry(m.vars[c].name, m.cons[r].name, a);
    }
    if (in_int) {
        char mk[16];
        std::snprintf(mk, sizeof mk, "MK%04d", marker++);
        os << "    " << detail::pad_field(mk, 10) << detail::pad_field("'MARKER'", 25)
           << "'INTEND'\n";
    }
    os << "RHS\n";
    for (const Constraint& c : m.cons)
        if (c.rhs != 0.0)
            os << "    " << detail::pad_field("RHS", 10) << detail::pad_field(c.name, 10)
               << detail::fmt_num(c.rhs) << "\n";
    const double inf = std::numeric_limits<double>::infinity();
    std::ostringstream bnd;
    for (const Variable& v : m.vars) {
        if (v.kind == VarKind::Binary) {
            bnd << " BV " << detail::pad_field("BND", 10) << v.name << "\n";
            continue;
        }
        if (v.lower == v.upper) {
            bnd << " FX " << detail::pad_field("BND", 10) << detail::pad_field(v.name, 10)
                << detail::fmt_num(v.lower) << "\n";
            continue;
        }
        if (v.lower == -inf)
            bnd << " MI " << detail::pad_field("BND", 10) << v.name << "\n";
        else if (v.lower != 0.0)
            bnd << " LO " << detail::pad_field("BND", 10) << detail::pad_field(v.name, 10)
                << detail::fmt_num(v.lower) << "\n";
        if (v.upper != inf)
            bnd << " UP " << detail::pad_field("BND", 10) << detail::pad_field(v.name, 10)
                << detail::fmt_num(v.upper) << "\n";
    }
    const std::string bnd_str = bnd.str();
    if (!bnd_str.empty()) os << "BOUNDS\n" << bnd_str;
    os << "ENDATA\n";
    return os.str();
}

inline MilpModel import_mps(const std::string& text) {
    MilpModel m;
    std::map<std::string, int> row_of, col_of;
    std::string obj_row;
    enum class Sec { None, Rows, Columns, Rhs, Ranges, Bounds, Done } sec = Sec::None;
    bool in_int = false;
    const double inf = std::numeric_limits<double>::infinity();

    auto ensure_col = [&](const std::string& name) {
        auto it = col_of.find(name);
        if (it != col_of.end()) return it->second;
        const int idx = m.var_count();
        col_of.emplace(name, idx);
        m.vars.push_back(Variable{name, in_int ? VarKind::Integer : VarKind::Continuous, 0.0, inf});
        m.obj.push_back(0.0);
        return idx;
    };

    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '*') continue;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string w; ls >> w;) tok.push_back(w);
        if (tok.empty()) continue;
        if (!std::isspace(static_cast<unsigned char>(line[0]))) {
            const std::string& kw = tok[0];
            if (kw == "NAME") sec = Sec::None;
            else if (kw == "ROWS") sec = Sec::Rows;
            else if (kw == "COLUMNS") sec = Sec::Columns;
            else if (kw == "RHS") sec = Sec::Rhs;
            else if (kw == "RANGES") sec = Sec::Ranges;
            else if (kw == "BOUNDS") sec = Sec::Bounds;
            else if (kw == "ENDATA") { sec = Sec::Done; break; }
            else throw std::runtime_error("import_mps: unknown section '" + kw + "'");
            continue;
        }
        switch (sec) {
            case Sec::Rows: {
                if (tok.size() != 2) throw std::runtime_error("import_mps: malformed ROWS line");
                if (tok[0] == "N") {
                    if (obj_row.empty()) obj_row = tok[1];
                } else {
                    Relation rel;
                    if (tok[0] == "L") rel = Relation::LessEq;
                    else if (tok[0] == "G") rel = Relation::GreaterEq;
                    else if (tok[0] == "E") rel = Relation::Equal;
                    else throw std::runtime_error("import_mps: bad row type " + tok[0]);
                    row_of.emplace(tok[1], m.con_count());
                    m.cons.push_back(Constraint{tok[1], {}, rel, 0.0});
                }
                break;
            }
            case Sec::Columns: {
                if (tok.size() >= 3 && tok[1] == "'MARKER'") {
                    for (const std::string& w : tok)
                        if (w == "'INTORG'") in_int = true;
                        else if (w == "'INTEND'") in_int = false;
                    break;
                }
                if (tok.size() < 3 || tok.size() % 2 == 0)
                    throw std::runtime_error("import_mps: malformed COLUMNS line");
                const int c = ensure_col(tok[0]);
                for (size_t k = 1; k + 1 < tok.size(); k += 2) {
                    const double v = std::stod(tok[k + 1]);
                    if (tok[k] == obj_row) m.obj[c] = v;
                    else {
                        auto it = row_of.find(tok[k]);
                        if (it == row_of.end())
                            throw std::runtime_error("import_mps: unknown row " + tok[k]);
                        m.cons[it->second].terms.push_back({c, v});
                    }
                }
                break;
            }
            case Sec::Rhs: {
                if (tok.size() < 3 || tok.size() % 2 == 0)
                    throw std::runtime_error("import_mps: malformed RHS line");
                for (size_t k = 1; k + 1 < tok.size(); k += 2) {
                    auto it = row_of.find(tok[k]);
                    if (it == row_of.end())
                        throw std::runtime_error("import_mps: unknown RHS row " + tok[k]);
                    m.cons[it->second].rhs = std::stod(tok[k + 1]);
                }
                break;
            }
            case Sec::Bounds: {
                if (tok.size() < 3) throw std::runtime_error("import_mps: malformed BOUNDS line");
                const std::string& kind = tok[0];
                auto it = col_of.find(tok[2]);
                if (it == col_of.end())
                    throw std::runtime_error("import_mps: bound on unknown column " + tok[2]);
                Variable& v = m.vars[it->second];
                if (kind == "BV") {
                    v.kind = VarKind::Binary;
                    v.lower = 0.0;
                    v.upper = 1.0;
                } else if (kind == "MI") {
                    v.lower = -inf;
                } else if (kind == "PL") {
                    v.upper = inf;
                } else {
                    if (tok.size() < 4)
                        throw std::runtime_error("import_mps: bound line missing value");
                    const double val = std::stod(tok[3]);
                    if (kind == "UP") v.upper = val;
                    else if (kind == "LO") v.lower = val;
                    else if (kind == "FX") v.lower = v.upper = val;
                    else if (kind == "UI") { v.upper = val; v.kind = VarKind::Integer; }
                    else if (kind == "LI") { v.lower = val; v.kind = VarKind::Integer; }
                    else throw std::runtime_error("import_mps: bound type " + kind);
                }
                break;
            }
            case Sec::Ranges:
                throw std::runtime_error("import_mps: RANGES not supported");
            default:
                break;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// LP
// ---------------------------------------------------------------------------

namespace detail {

inline void lp_write_terms(std::ostream& os, const std::vector<std::pair<std::string, double>>& terms,
                           const std::string& indent) {
    if (terms.empty()) {
        os << " 0";
        return;
    }
    int on_line = 0;
    bool first = true;
    for (const auto& [name, coef] : terms) {
        if (on_line == 6) {
            os << "\n" << indent;
            on_line = 0;
        }
        const double mag = std::abs(coef);
        if (first) {
            os << " " << (coef < 0 ? "- " : "") << fmt_num(mag) << " " << name;
            first = false;
        } else {
            os << " " << (coef < 0 ? "-" : "+") << " " << fmt_num(mag) << " " << name;
        }
        ++on_line;
    }
}

} // namespace detail

// LP text is canonical under variable NAMES: term lists and the trailing
// sections are name-sorted, so a model read back from LP (where column order
// is whatever the text introduced first) re-exports to the identical bytes.
inline std::string export_lp(const MilpModel& m) {
    auto by_name = [](const std::pair<std::string, double>& a,
                      const std::pair<std::string, double>& b) { return a.first < b.first; };
    std::ostringstream os;
    os << "\\ massflow linear model\n";
    os << "Minimize\n obj:";
    {
        std::vector<std::pair<std::string, double>> terms;
        for (int c = 0; c < m.var_count(); ++c)
            if (m.obj[c] != 0.0) terms.push_back({m.vars[c].name, m.obj[c]});
        std::sort(terms.begin(), terms.end(), by_name);
        detail::lp_write_terms(os, terms, "   ");
        os << "\n";
    }
    os << "Subject To\n";
    for (const Constraint& con : m.cons) {
        std::map<int, double> merged;
        for (const LinTerm& t : con.terms) merged[t.col] += t.coef;
        std::vector<std::pair<std::string, double>> terms;
        for (const auto& [c, a] : merged) terms.push_back({m.vars[c].name, a});
        std::sort(terms.begin(), terms.end(), by_name);
        os << " " << con.name << ":";
        detail::lp_write_terms(os, terms, "   ");
        const char* rel = con.rel == Relation::LessEq ? "<=" : con.rel == Relation::Equal ? "=" : ">=";
        os << " " << rel << " " << detail::fmt_num(con.rhs) << "\n";
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::string, std::string>> bound_lines;
    for (const Variable& v : m.vars) {
        if (v.kind == VarKind::Binary) continue; // implied [0,1]
        std::ostringstream b;
        if (v.lower == v.upper) {
            b << " " << v.name << " = " << detail::fmt_num(v.lower) << "\n";
        } else if (v.lower == -inf && v.upper == inf) {
            b << " " << v.name << " free\n";
        } else if (v.lower == -inf) {
            b << " -infinity <= " << v.name << " <= " << detail::fmt_num(v.upper) << "\n";
        } else if (v.upper == inf) {
            if (v.lower != 0.0) b << " " << v.name << " >= " << detail::fmt_num(v.lower) << "\n";
        } else if (v.lower == 0.0) {
            b << " " << v.name << " <= " << detail::fmt_num(v.upper) << "\n";
        } else {
            b << " " << detail::fmt_num(v.lower) << " <= " << v.name << " <= "
              << detail::fmt_num(v.upper) << "\n";
        }
        if (!b.str().empty()) bound_lines.push_back({v.name, b.str()});
    }
    std::sort(bound_lines.begin(), bound_lines.end());
    if (!bound_lines.empty()) {
        os << "Bounds\n";
        for (const auto& [name, line] : bound_lines) os << line;
    }
    std::vector<std::string> generals, binaries;
    for (const Variable& v : m.vars) {
        if (v.kind == VarKind::Integer) generals.push_back(v.name);
        if (v.kind == VarKind::Binary) binaries.push_back(v.name);
    }
    std::sort(generals.begin(), generals.end());
    std::sort(binaries.begin(), binaries.end());
    auto name_block = [&os](const char* header, const std::vector<std::string>& names) {
        if (names.empty()) return;
        os << header << "\n";
        int on_line = 0;
        for (const std::string& nm : names) {
            os << " " << nm;
            if (++on_line == 8) {
                os << "\n";
                on_line = 0;
            }
        }
        if (on_line) os << "\n";
    };
    name_block("Generals", generals);
    name_block("Binaries", binaries);
    os << "End\n";
    return os.str();
}

namespace detail {

inline bool lp_is_number(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

// Parses "[sign] [coef] name ..." sequences into (name, coef) pairs.
inline std::vector<std::pair<std::string, double>> lp_parse_terms(
    const std::vector<std::string>& tok, size_t begin, size_t end_excl, const char* where) {
    std::vector<std::pair<std::string, double>> out;
    double sign = 1.0;
    bool have_coef = false;
    double coef = 1.0;
    for (size_t k = begin; k < end_excl; ++k) {
        const std::string& w = tok[k];
        if (w == "+") continue;
        if (w == "-") {
            sign = -sign;
            continue;
        }
        if (lp_is_number(w)) {
            if (have_coef)
                throw std::runtime_error(std::string("import_lp: dangling number in ") + where);
            coef = std::stod(w);
            have_coef = true;
            continue;
        }
        out.push_back({w, sign * coef});
        sign = 1.0;
        coef = 1.0;
        have_coef = false;
    }
    if (have_coef && !(out.empty() && coef == 0.0))
        throw std::runtime_error(std::string("import_lp: trailing coefficient in ") + where);
    return out;
}

} // namespace detail

inline MilpModel import_lp(const std::string& text) {
    // Logical statements: section keywords, and within Minimize/Subject To a
    // statement starts at a "name:" label and may continue on indented lines.
    std::vector<std::string> tok;
    {
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            const auto cut = line.find('\\');
            if (cut != std::string::npos) line.erase(cut);
            std::istringstream ls(line);
            for (std::string w; ls >> w;) {
                // split "name:" into "name" ":"
                if (w.size() > 1 && w.back() == ':') {
                    tok.push_back(w.substr(0, w.size() - 1));
                    tok.push_back(":");
                } else {
                    tok.push_back(w);
                }
            }
        }
    }
    auto lower = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    auto is_section = [&lower](const std::string& w, size_t i, const std::vector<std::string>& v,
                               size_t* skip) -> std::string {
        const std::string lw = lower(w);
        if (lw == "minimize" || lw == "min") { *skip = 1; return "min"; }
        if (lw == "maximize" || lw == "max") { *skip = 1; return "max"; }
        if (lw == "subject" && i + 1 < v.size() && lower(v[i + 1]) == "to") { *skip = 2; return "st"; }
        if (lw == "st" || lw == "s.t.") { *skip = 1; return "st"; }
        if (lw == "bounds" || lw == "bound") { *skip = 1; return "bounds"; }
        if (lw == "generals" || lw == "general" || lw == "gen") { *skip = 1; return "generals"; }
        if (lw == "binaries" || lw == "binary" || lw == "bin") { *skip = 1; return "binaries"; }
        if (lw == "end") { *skip = 1; return "end"; }
        *skip = 0;
        return "";
    };

    MilpModel m;
    std::map<std::string, int> col_of;
    const double inf = std::numeric_limits<double>::infinity();
    auto ensure_col = [&](const std::string& name) {
        auto it = col_of.find(name);
        if (it != col_of.end()) return it->second;
        const int idx = m.var_count();
        col_of.emplace(name, idx);
        m.vars.push_back(Variable{name, VarKind::Continuous, 0.0, inf});
        m.obj.push_back(0.0);
        return idx;
    };

    std::string section;
    size_t i = 0;
    while (i < tok.size()) {
        size_t skip = 0;
        const std::string sec = is_section(tok[i], i, tok, &skip);
        if (!sec.empty()) {
            if (sec == "max") throw std::runtime_error("import_lp: maximization not supported");
            section = sec;
            i += skip;
            if (section == "end") break;
            continue;
        }
        if (section == "min") {
            // optional label
            size_t j = i;
            if (j + 1 < tok.size() && tok[j + 1] == ":") j += 2;
            size_t k = j;
            while (k < tok.size()) {
                size_t s2 = 0;
                if (!is_section(tok[k], k, tok, &s2).empty()) break;
                ++k;
            }
            for (const auto& [name, coef] : detail::lp_parse_terms(tok, j, k, "objective"))
                m.obj[ensure_col(name)] += coef;
            i = k;
        } else if (section == "st") {
            if (i + 1 >= tok.size() || tok[i + 1] != ":")
                throw std::runtime_error("import_lp: constraint without a label near '" + tok[i] + "'");
            Constraint con;
            con.name = tok[i];
            size_t k = i + 2;
            size_t rel_pos = std::string::npos;
            while (k < tok.size()) {
                if (tok[k] == "<=" || tok[k] == ">=" || tok[k] == "=" || tok[k] == "=<" ||
                    tok[k] == "=>") {
                    rel_pos = k;
                    break;
                }
                ++k;
            }
            if (rel_pos == std::string::npos)
                throw std::runtime_error("import_lp: constraint " + con.name + " has no relation");
            const std::string& r = tok[rel_pos];
            con.rel = (r == "<=" || r == "=<")   ? Relation::LessEq
                      : (r == ">=" || r == "=>") ? Relation::GreaterEq
                                                 : Relation::Equal;
            if (rel_pos + 1 >= tok.size() || !detail::lp_is_number(tok[rel_pos + 1]))
                throw std::runtime_error("import_lp: constraint " + con.name + " has no rhs");
            con.rhs = std::stod(tok[rel_pos + 1]);
            for (const auto& [name, coef] :
                 detail::lp_parse_terms(tok, i + 2, rel_pos, con.name.c_str()))
                con.terms.push_back({ensure_col(name), coef});
            m.cons.push_back(std::move(con));
            i = rel_pos + 2;
        } else if (section == "bounds") {
            // forms: v = a | v free | v <= b | v >= a | a <= v <= b | -infinity <= v <= b
            if (detail::lp_is_number(tok[i]) || tok[i] == "-infinity") {
                const double lo = tok[i] == "-infinity" ? -inf : std::stod(tok[i]);
                if (i + 4 >= tok.size() || tok[i + 1] != "<=" || tok[i + 3] != "<=")
                    throw std::runtime_error("import_lp: malformed range bound");
                Variable& v = m.vars[ensure_col(tok[i + 2])];
                v.lower = lo;
                v.upper = std::stod(tok[i + 4]);
                i += 5;
            } else {
                Variable& v = m.vars[ensure_col(tok[i])];
                if (i + 1 < tok.size() && lower(tok[i + 1]) == "free") {
                    v.lower = -inf;
                    v.upper = inf;
                    i += 2;
                } else if (i + 2 < tok.size() && (tok[i + 1] == "<=" || tok[i + 1] == ">=" ||
                                                  tok[i + 1] == "=")) {
                    const double val = std::stod(tok[i + 2]);
                    if (tok[i + 1] == "<=") v.upper = val;
                    else if (tok[i + 1] == ">=") v.lower = val;
                    else v.lower = v.upper = val;
                    i += 3;
                } else {
                    throw std::runtime_error("import_lp: malformed bound near '" + tok[i] + "'");
                }
            }
        } else if (section == "generals") {
            m.vars[ensure_col(tok[i])].kind = VarKind::Integer;
            ++i;
        } else if (section == "binaries") {
            Variable& v = m.vars[ensure_col(tok[i])];
            v.kind = VarKind::Binary;
            v.lower = 0.0;
            v.upper = 1.0;
            ++i;
        } else {
            throw std::runtime_error("import_lp: unexpected token '" + tok[i] + "'");
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Energy matrix CSV
// ---------------------------------------------------------------------------

inline std::string export_energy_csv(const EnergyMatrix& em) {
    std::ostringstream os;
    os << "i,j,dist_m,cost_j_per_kg\n";
    for (int i = 0; i < em.node_count(); ++i)
        for (int j = i + 1; j < em.node_count(); ++j)
            os << i << "," << j << "," << detail::fmt_num(em.dist(i, j), "%.9g") << ","
               << detail::fmt_num(em.cost(i, j), "%.9g") << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Structural comparison, used by round-trip checks.
// ---------------------------------------------------------------------------

// Mathematical equality up to rtol, keyed by variable NAME so that formats
// which reorder columns (LP reads them in order of first appearance) still
// compare equal. Row order is preserved by both formats and is compared.
inline bool models_close(const MilpModel& a, const MilpModel& b, double rtol = 1e-11) {
    auto near = [rtol](double x, double y) {
        if (x == y) return true; // covers infinities
        return std::abs(x - y) <= rtol * std::max({1.0, std::abs(x), std::abs(y)});
    };
    if (a.var_count() != b.var_count() || a.con_count() != b.con_count()) return false;
    std::map<std::string, int> cols_b;
    for (int c = 0; c < b.var_count(); ++c) cols_b.emplace(b.vars[c].name, c);
    if (static_cast<int>(cols_b.size()) != b.var_count()) return false;
    for (int c = 0; c < a.var_count(); ++c) {
        const Variable& va = a.vars[c];
        auto it = cols_b.find(va.name);
        if (it == cols_b.end()) return false;
        const Variable& vb = b.vars[it->second];
        if (va.kind != vb.kind) return false;
        if (!near(va.lower, vb.lower) || !near(va.upper, vb.upper)) return false;
        if (!near(a.obj[c], b.obj[it->second])) return false;
    }
    for (int r = 0; r < a.con_count(); ++r) {
        const Constraint &ca = a.cons[r], &cb = b.cons[r];
        if (ca.name != cb.name || ca.rel != cb.rel || !near(ca.rhs, cb.rhs)) return false;
        std::map<std::string, double> ma, mb;
        for (const LinTerm& t : ca.terms) ma[a.vars[t.col].name] += t.coef;
        for (const LinTerm& t : cb.terms) mb[b.vars[t.col].name] += t.coef;
        if (ma.size() != mb.size()) return false;
        for (const auto& [name, v] : ma) {
            auto it = mb.find(name);
            if (it == mb.end() || !near(v, it->second)) return false;
        }
    }
    return true;
}

} // namespace massflow
