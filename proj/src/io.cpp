#include "entangled/io.hpp"

#include <fstream>
#include <sstream>

#include "entangled/errors.hpp"

namespace entangled {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

// Reads the next meaningful line; returns false at end of stream.
bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        return true;
    }
    return false;
}

std::int64_t parse_int(const std::string& tok, std::size_t lineno) {
    try {
        std::size_t used = 0;
        std::int64_t v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(lineno, "expected an integer, got '" + tok + "'");
    }
}

// "key=value" headers.
std::string header_value(const std::vector<std::string>& toks, const std::string& key,
                         std::size_t lineno) {
    for (const auto& t : toks) {
        if (t.rfind(key + "=", 0) == 0) return t.substr(key.size() + 1);
    }
    throw ParseError(lineno, "missing header field '" + key + "='");
}

Rational parse_value(const std::string& tok, std::size_t lineno) {
    try {
        return parse_rational(tok);
    } catch (const Error& e) {
        throw ParseError(lineno, e.what());
    }
}

StepFunction parse_cells(std::istream& in, int dim, std::int64_t scale, std::size_t& lineno) {
    StepFunction::CellMap cells;
    std::string line;
    while (next_line(in, line, lineno)) {
        auto toks = tokens_of(line);
        if (static_cast<int>(toks.size()) != dim + 1)
            throw ParseError(lineno, "expected " + std::to_string(dim) +
                                         " indices and a value, got " +
                                         std::to_string(toks.size()) + " tokens");
        CellKey key(dim);
        for (int a = 0; a < dim; ++a) key[a] = parse_int(toks[a], lineno);
        Rational v = parse_value(toks.back(), lineno);
        if (cells.count(key)) throw DuplicateCell(lineno, "duplicate cell index");
        cells[key] = v;
    }
    return StepFunction(dim, scale, std::move(cells));
}

}  // namespace

StepFunction parse_step_function(std::istream& in) {
    std::size_t lineno = 0;
    std::string line;
    if (!next_line(in, line, lineno)) throw ParseError(1, "empty input");
    auto toks = tokens_of(line);
    if (toks.empty() || toks[0] != "STEP") throw ParseError(lineno, "expected STEP header");
    int dim = static_cast<int>(parse_int(header_value(toks, "d", lineno), lineno));
    std::int64_t scale = parse_int(header_value(toks, "scale", lineno), lineno);
    if (dim < 1) throw ParseError(lineno, "dimension must be >= 1");
    return parse_cells(in, dim, scale, lineno);
}

void write_step_function(std::ostream& out, const StepFunction& f) {
    out << "STEP d=" << f.dimension() << " scale=" << f.resolution() << "\n";
    for (const auto& [key, value] : f.cells()) {
        for (auto i : key) out << i << " ";
        out << to_fraction_string(value) << "\n";
    }
}

PerfectKernel parse_kernel(std::istream& in) {
    std::size_t lineno = 0;
    std::string line;
    if (!next_line(in, line, lineno)) throw ParseError(1, "empty input");
    auto toks = tokens_of(line);
    if (toks.empty() || toks[0] != "KERNEL") throw ParseError(lineno, "expected KERNEL header");
    int m = static_cast<int>(parse_int(header_value(toks, "m", lineno), lineno));
    int n = static_cast<int>(parse_int(header_value(toks, "n", lineno), lineno));
    std::int64_t scale = parse_int(header_value(toks, "scale", lineno), lineno);
    if (m < 1 || n < 1) throw ParseError(lineno, "m, n must be >= 1");
    return PerfectKernel(m, n, parse_cells(in, m + n, scale, lineno));
}

void write_kernel(std::ostream& out, const PerfectKernel& k) {
    out << "KERNEL m=" << k.m << " n=" << k.n << " scale=" << k.resolution() << "\n";
    for (const auto& [key, value] : k.body.cells()) {
        for (auto i : key) out << i << " ";
        out << to_fraction_string(value) << "\n";
    }
}

BipartiteGraph parse_graph(std::istream& in) {
    std::size_t lineno = 0;
    std::string line;
    if (!next_line(in, line, lineno)) throw ParseError(1, "empty input");
    auto toks = tokens_of(line);
    if (toks.empty() || toks[0] != "GRAPH") throw ParseError(lineno, "expected GRAPH header");
    int m = static_cast<int>(parse_int(header_value(toks, "m", lineno), lineno));
    int n = static_cast<int>(parse_int(header_value(toks, "n", lineno), lineno));
    std::set<Edge> edges;
    while (next_line(in, line, lineno)) {
        auto ts = tokens_of(line);
        if (ts.size() != 2) throw ParseError(lineno, "expected an edge '<i> <j>'");
        int i = static_cast<int>(parse_int(ts[0], lineno));
        int j = static_cast<int>(parse_int(ts[1], lineno));
        if (i < 1 || i > m || j < 1 || j > n)
            throw ParseError(lineno, "edge (" + std::to_string(i) + "," + std::to_string(j) +
                                         ") out of range");
        edges.insert({i, j});
    }
    try {
        return BipartiteGraph(m, n, std::move(edges));
    } catch (const Error& e) {
        throw ParseError(lineno, e.what());
    }
}

void write_graph(std::ostream& out, const BipartiteGraph& g) {
    out << "GRAPH m=" << g.m << " n=" << g.n << "\n";
    for (const auto& [i, j] : g.edges) out << i << " " << j << "\n";
}

HaarCoefficientField parse_coefficients(std::istream& in, int* m_out, int* n_out) {
    std::size_t lineno = 0;
    std::string line;
    if (!next_line(in, line, lineno)) throw ParseError(1, "empty input");
    auto toks = tokens_of(line);
    if (toks.empty() || toks[0] != "COEFF") throw ParseError(lineno, "expected COEFF header");
    int m = static_cast<int>(parse_int(header_value(toks, "m", lineno), lineno));
    int n = static_cast<int>(parse_int(header_value(toks, "n", lineno), lineno));
    std::string flags = header_value(toks, "sig", lineno);
    if (static_cast<int>(flags.size()) != m + n)
        throw ParseError(lineno, "sig must carry one flag per axis");
    std::vector<Flag> a, b;
    for (int i = 0; i < m + n; ++i) {
        if (flags[i] != '1' && flags[i] != 'h') throw ParseError(lineno, "sig flags are '1' or 'h'");
        (i < m ? a : b).push_back(flags[i] == 'h' ? Flag::Haar : Flag::Unit);
    }
    if (m_out) *m_out = m;
    if (n_out) *n_out = n;
    HaarCoefficientField field{Signature(a, b), {}};
    while (next_line(in, line, lineno)) {
        auto ts = tokens_of(line);
        if (ts.size() != 4) throw ParseError(lineno, "expected '<k> <ix> <jy> <value>'");
        std::int64_t k = parse_int(ts[0], lineno), ix = parse_int(ts[1], lineno),
                     jy = parse_int(ts[2], lineno);
        DyadicSquare q{k, ix, jy};
        if (field.coeffs.count(q)) throw DuplicateCell(lineno, "duplicate square");
        field.coeffs[q] = parse_value(ts[3], lineno);
    }
    return field;
}

void write_coefficients(std::ostream& out, const HaarCoefficientField& field, int m, int n) {
    out << "COEFF m=" << m << " n=" << n << " sig=";
    for (Flag f : field.signature.a) out << (f == Flag::Haar ? 'h' : '1');
    for (Flag f : field.signature.b) out << (f == Flag::Haar ? 'h' : '1');
    out << "\n";
    for (const auto& [q, lambda] : field.coeffs)
        out << q.scale() << " " << q.x.index << " " << q.y.index << " "
            << to_fraction_string(lambda) << "\n";
}

namespace {

template <typename T>
T load_with(const std::string& path, T (*parser)(std::istream&)) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    try {
        return parser(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path + ": " + e.detail());
    }
}

}  // namespace

StepFunction load_step_function(const std::string& path) {
    return load_with(path, parse_step_function);
}

PerfectKernel load_kernel(const std::string& path) { return load_with(path, parse_kernel); }

BipartiteGraph load_graph(const std::string& path) { return load_with(path, parse_graph); }

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::uint64_t hash = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

}  // namespace entangled
