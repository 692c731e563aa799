#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "entangled/numbers.hpp"

namespace entangled {

// An edge (i, j), 1 <= i <= m, 1 <= j <= n.
using Edge = std::pair<int, int>;

// The entanglement structure E of the multilinear form: x_i and y_j are
// joined exactly when the form contains a function F_{i,j}(x_i, y_j).
// No isolated vertices are allowed.
struct BipartiteGraph {
    int m = 0;
    int n = 0;
    std::set<Edge> edges;

    BipartiteGraph() = default;
    BipartiteGraph(int m_, int n_, std::set<Edge> edges_);

    bool has_edge(int i, int j) const { return edges.count({i, j}) > 0; }
    int degree_x(int i) const;
    int degree_y(int j) const;
};

// The sqcup graph of the twisted paraproduct: m = n = 2, E = {(1,1),(1,2),(2,1)}.
BipartiteGraph sqcup_graph();
// The complete square graph: m = n = 2, all four edges.
BipartiteGraph box_graph();
// m = 1 star: E = {(1,1),...,(1,n)}.
BipartiteGraph star_graph(int n);
// m = n with only the matching edges (j, j).
BipartiteGraph matching_graph(int n);

struct Component {
    std::set<int> xs;
    std::set<int> ys;
    std::set<Edge> edges;

    bool is_complete() const { return edges.size() == xs.size() * ys.size(); }
    int max_side() const { return static_cast<int>(std::max(xs.size(), ys.size())); }
};

// Connected components, sorted by smallest x-vertex. Vertex and edge sets
// partition those of the graph.
std::vector<Component> components(const BipartiteGraph& g);

enum class Flag { Unit, Haar };

// One choice of indicator/Haar per axis, not all indicator. S and T are the
// Haar-bearing x- and y-axis sets.
struct Signature {
    std::vector<Flag> a;  // size m
    std::vector<Flag> b;  // size n

    Signature(std::vector<Flag> a_, std::vector<Flag> b_);

    std::set<int> haar_x() const;  // S, 1-based
    std::set<int> haar_y() const;  // T, 1-based

    friend auto operator<=>(const Signature&, const Signature&) = default;
};

std::ostream& operator<<(std::ostream& os, const Signature& s);

// All 2^(m+n) - 1 signatures in a fixed deterministic order.
std::vector<Signature> all_signatures(int m, int n);

enum class ParaproductClass { C1, C2, NC1, NC2 };

std::ostream& operator<<(std::ostream& os, ParaproductClass c);

// C1 when max{|S|,|T|} >= 2; NC1 when |S|+|T| = 1; otherwise |S| = |T| = 1 and
// the class is C2 or NC2 according to whether (i, j) is an edge.
ParaproductClass classify_signature(const BipartiteGraph& g, const Signature& s);

// Per-edge positive integer thresholds d_{i,j}.
struct ExponentAssignment {
    std::map<Edge, int> d;

    Rational reciprocal_sum() const;
};

// One exponent per edge, in (1, infinity].
struct ExponentValue {
    bool infinite = false;
    Rational value;  // meaningful when finite

    Rational reciprocal() const { return infinite ? Rational(0) : Rational(1) / value; }
};

struct ExponentTuple {
    std::map<Edge, ExponentValue> p;

    Rational reciprocal_sum() const;
};

// The threshold algorithm: per component, max side (complete or max side <= 2)
// or max side + 1; when the reciprocal sum fails to exceed 1 the graph is a
// tree with min{m,n} = 2 and the exceptional assignment applies (d = N
// everywhere, or d = N except 2N-2 on the big vertex's edge to the common
// neighbor when the other vertex of the 2-side is a leaf, N = max{m,n}).
// Throws DegenerateGraph when min{m,n} = 1. The result always satisfies
// sum 1/d > 1.
ExponentAssignment exponent_thresholds(const BipartiteGraph& g);

// A tuple with sum 1/p = 1 and p > d on every edge, by proportional scaling
// of 1/d. Throws Infeasible when sum 1/d <= 1.
ExponentTuple feasibility_witness(const ExponentAssignment& d);

}  // namespace entangled
