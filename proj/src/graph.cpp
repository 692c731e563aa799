#include "entangled/graph.hpp"

#include <algorithm>
#include <ostream>

#include "entangled/errors.hpp"

namespace entangled {

BipartiteGraph::BipartiteGraph(int m_, int n_, std::set<Edge> edges_)
    : m(m_), n(n_), edges(std::move(edges_)) {
    if (m < 1 || n < 1) throw Error("BipartiteGraph: m, n must be >= 1");
    std::vector<bool> xs(m, false), ys(n, false);
    for (const auto& [i, j] : edges) {
        if (i < 1 || i > m || j < 1 || j > n)
            throw Error("BipartiteGraph: edge (" + std::to_string(i) + "," + std::to_string(j) +
                        ") out of range");
        xs[i - 1] = true;
        ys[j - 1] = true;
    }
    for (int i = 0; i < m; ++i)
        if (!xs[i]) throw Error("BipartiteGraph: isolated vertex x" + std::to_string(i + 1));
    for (int j = 0; j < n; ++j)
        if (!ys[j]) throw Error("BipartiteGraph: isolated vertex y" + std::to_string(j + 1));
}

int BipartiteGraph::degree_x(int i) const {
    int d = 0;
    for (const auto& e : edges) d += e.first == i;
    return d;
}

int BipartiteGraph::degree_y(int j) const {
    int d = 0;
    for (const auto& e : edges) d += e.second == j;
    return d;
}

BipartiteGraph sqcup_graph() { return {2, 2, {{1, 1}, {1, 2}, {2, 1}}}; }

BipartiteGraph box_graph() { return {2, 2, {{1, 1}, {1, 2}, {2, 1}, {2, 2}}}; }

BipartiteGraph star_graph(int n) {
    std::set<Edge> e;
    for (int j = 1; j <= n; ++j) e.insert({1, j});
    return {1, n, std::move(e)};
}

BipartiteGraph matching_graph(int n) {
    std::set<Edge> e;
    for (int j = 1; j <= n; ++j) e.insert({j, j});
    return {n, n, std::move(e)};
}

std::vector<Component> components(const BipartiteGraph& g) {
    std::vector<int> comp_x(g.m, -1), comp_y(g.n, -1);
    int next = 0;
    for (int start = 1; start <= g.m; ++start) {
        if (comp_x[start - 1] >= 0) continue;
        int id = next++;
        std::vector<std::pair<bool, int>> stack{{true, start}};  // (is_x, vertex)
        comp_x[start - 1] = id;
        while (!stack.empty()) {
            auto [is_x, v] = stack.back();
            stack.pop_back();
            for (const auto& [i, j] : g.edges) {
                if (is_x && i == v && comp_y[j - 1] < 0) {
                    comp_y[j - 1] = id;
                    stack.push_back({false, j});
                } else if (!is_x && j == v && comp_x[i - 1] < 0) {
                    comp_x[i - 1] = id;
                    stack.push_back({true, i});
                }
            }
        }
    }
    std::vector<Component> out(next);
    for (int i = 1; i <= g.m; ++i) out[comp_x[i - 1]].xs.insert(i);
    for (int j = 1; j <= g.n; ++j) out[comp_y[j - 1]].ys.insert(j);
    for (const auto& e : g.edges) out[comp_x[e.first - 1]].edges.insert(e);
    // Components are discovered from ascending start-x, so they already come
    // sorted by smallest x-vertex.
    return out;
}

Signature::Signature(std::vector<Flag> a_, std::vector<Flag> b_)
    : a(std::move(a_)), b(std::move(b_)) {
    bool any_haar = false;
    for (Flag f : a) any_haar = any_haar || f == Flag::Haar;
    for (Flag f : b) any_haar = any_haar || f == Flag::Haar;
    if (!any_haar) throw Error("Signature: all-unit signature is excluded");
}

std::set<int> Signature::haar_x() const {
    std::set<int> s;
    for (int i = 0; i < static_cast<int>(a.size()); ++i)
        if (a[i] == Flag::Haar) s.insert(i + 1);
    return s;
}

std::set<int> Signature::haar_y() const {
    std::set<int> t;
    for (int j = 0; j < static_cast<int>(b.size()); ++j)
        if (b[j] == Flag::Haar) t.insert(j + 1);
    return t;
}

std::ostream& operator<<(std::ostream& os, const Signature& s) {
    for (Flag f : s.a) os << (f == Flag::Haar ? 'h' : '1');
    for (Flag f : s.b) os << (f == Flag::Haar ? 'h' : '1');
    return os;
}

std::vector<Signature> all_signatures(int m, int n) {
    std::vector<Signature> out;
    for (unsigned mask = 1; mask < (1u << (m + n)); ++mask) {
        std::vector<Flag> a(m, Flag::Unit), b(n, Flag::Unit);
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) a[i] = Flag::Haar;
        for (int j = 0; j < n; ++j)
            if (mask & (1u << (m + j))) b[j] = Flag::Haar;
        out.emplace_back(std::move(a), std::move(b));
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, ParaproductClass c) {
    switch (c) {
        case ParaproductClass::C1: return os << "C1";
        case ParaproductClass::C2: return os << "C2";
        case ParaproductClass::NC1: return os << "NC1";
        case ParaproductClass::NC2: return os << "NC2";
    }
    return os;
}

ParaproductClass classify_signature(const BipartiteGraph& g, const Signature& s) {
    auto S = s.haar_x(), T = s.haar_y();
    if (std::max(S.size(), T.size()) >= 2) return ParaproductClass::C1;
    if (S.size() + T.size() == 1) return ParaproductClass::NC1;
    int i = *S.begin(), j = *T.begin();
    return g.has_edge(i, j) ? ParaproductClass::NC2 : ParaproductClass::C2;
}

Rational ExponentAssignment::reciprocal_sum() const {
    Rational sum(0);
    for (const auto& [e, di] : d) sum += Rational(1, di);
    return sum;
}

Rational ExponentTuple::reciprocal_sum() const {
    Rational sum(0);
    for (const auto& [e, pe] : p) sum += pe.reciprocal();
    return sum;
}

namespace {

// The exceptional tree case of the threshold algorithm. `two_side_is_x` says
// whether the 2-element side is the x-side; vertices are in original labels.
ExponentAssignment exceptional_tree_assignment(const BipartiteGraph& g, bool two_side_is_x) {
    int N = std::max(g.m, g.n);
    auto deg = [&](int v) { return two_side_is_x ? g.degree_x(v) : g.degree_y(v); };
    auto edge_of = [&](int two_side_v, int other_v) {
        return two_side_is_x ? Edge{two_side_v, other_v} : Edge{other_v, two_side_v};
    };
    // The two vertices of the 2-side have exactly one common neighbor.
    std::set<int> nb1, nb2;
    for (const auto& [i, j] : g.edges) {
        int two_v = two_side_is_x ? i : j, other = two_side_is_x ? j : i;
        (two_v == 1 ? nb1 : nb2).insert(other);
    }
    std::vector<int> common;
    std::set_intersection(nb1.begin(), nb1.end(), nb2.begin(), nb2.end(),
                          std::back_inserter(common));
    if (common.size() != 1)
        throw Error("exponent_thresholds: internal: exceptional tree lacks a unique common neighbor");
    int w = common.front();

    ExponentAssignment out;
    if (deg(1) > 1 && deg(2) > 1) {
        // Both 2-side vertices have private neighbors (r != n): d = N throughout.
        for (const auto& e : g.edges) out.d[e] = N;
        return out;
    }
    // One 2-side vertex is a leaf (r = n): its single edge and the big
    // vertex's private edges get N; the big vertex's edge to the common
    // neighbor gets 2N - 2.
    int leaf = deg(1) == 1 ? 1 : 2, big = 3 - leaf;
    for (const auto& e : g.edges) out.d[e] = N;
    out.d[edge_of(big, w)] = 2 * N - 2;
    out.d[edge_of(leaf, w)] = N;
    return out;
}

}  // namespace

ExponentAssignment exponent_thresholds(const BipartiteGraph& g) {
    if (std::min(g.m, g.n) < 2)
        throw DegenerateGraph("exponent thresholds require m, n >= 2 (no estimate holds otherwise)");
    ExponentAssignment out;
    auto comps = components(g);
    for (const auto& c : comps) {
        int base = c.max_side();
        int d = (c.is_complete() || base <= 2) ? base : base + 1;
        for (const auto& e : c.edges) out.d[e] = d;
    }
    if (out.reciprocal_sum() > 1) return out;
    // Failure of the base rule forces: connected, min side 2, and a tree.
    bool tree = comps.size() == 1 &&
                g.edges.size() == static_cast<std::size_t>(g.m + g.n - 1) &&
                std::min(g.m, g.n) == 2;
    if (!tree) throw Error("exponent_thresholds: internal: infeasible base rule on a non-tree");
    out = exceptional_tree_assignment(g, g.m == 2);
    if (!(out.reciprocal_sum() > 1))
        throw Error("exponent_thresholds: internal: exceptional assignment infeasible");
    return out;
}

ExponentTuple feasibility_witness(const ExponentAssignment& d) {
    Rational sum = d.reciprocal_sum();
    if (!(sum > 1)) throw Infeasible("sum of reciprocals is " + to_fraction_string(sum));
    ExponentTuple out;
    for (const auto& [e, di] : d.d) out.p[e] = ExponentValue{false, Rational(di) * sum};
    return out;
}

}  // namespace entangled
