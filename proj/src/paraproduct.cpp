#include "entangled/paraproduct.hpp"

#include <algorithm>

#include "entangled/errors.hpp"

namespace entangled {

namespace {

void check_signature_shape(const PerfectKernel& k, const Signature& sig) {
    if (static_cast<int>(sig.a.size()) != k.m || static_cast<int>(sig.b.size()) != k.n)
        throw DimensionMismatch("signature arity does not match the kernel");
}

// Sign of the signature atom on one cell: 0-filtered by membership elsewhere.
inline int haar_sign(std::int64_t cell, std::int64_t interval_index, std::int64_t shift) {
    std::int64_t offset = cell - (interval_index << shift);
    return offset < (std::int64_t(1) << (shift - 1)) ? 1 : -1;
}

}  // namespace

HaarCoefficientField haar_coefficients(const PerfectKernel& k, const Signature& sig) {
    check_signature_shape(k, sig);
    HaarCoefficientField field{sig, {}};
    if (k.body.is_zero()) return field;
    const int dim = k.dimension();
    const std::int64_t res = k.resolution();
    const std::int64_t s_cov = k.covering_scale();

    for (std::int64_t s = s_cov; s <= res - 1; ++s) {
        const std::int64_t shift = res - s;
        std::map<std::pair<std::int64_t, std::int64_t>, Rational> sums;
        for (const auto& [key, value] : k.body.cells()) {
            std::int64_t ix = floor_shift(key[0], shift);
            bool aligned = true;
            for (int a = 1; a < k.m && aligned; ++a) aligned = floor_shift(key[a], shift) == ix;
            std::int64_t jy = floor_shift(key[k.m], shift);
            for (int a = k.m + 1; a < dim && aligned; ++a)
                aligned = floor_shift(key[a], shift) == jy;
            if (!aligned) continue;
            int sign = 1;
            for (int a = 0; a < k.m; ++a)
                if (sig.a[a] == Flag::Haar) sign *= haar_sign(key[a], ix, shift);
            for (int a = 0; a < k.n; ++a)
                if (sig.b[a] == Flag::Haar) sign *= haar_sign(key[k.m + a], jy, shift);
            sums[{ix, jy}] += sign > 0 ? value : -value;
        }
        const Rational scale_factor = pow2(2 * s - res * dim);
        for (const auto& [square, sum] : sums) {
            Rational lambda = sum * scale_factor;
            if (lambda != 0) field.coeffs[DyadicSquare{s, square.first, square.second}] = lambda;
        }
    }
    return field;
}

std::map<DyadicCube, Rational> full_decomposition_coefficients(const PerfectKernel& k,
                                                               const Signature& sig) {
    check_signature_shape(k, sig);
    std::map<DyadicCube, Rational> out;
    if (k.body.is_zero()) return out;
    const int dim = k.dimension();
    const std::int64_t res = k.resolution();
    const std::int64_t s_cov = k.covering_scale();

    for (std::int64_t s = s_cov; s <= res - 1; ++s) {
        const std::int64_t shift = res - s;
        std::map<CellKey, Rational> sums;
        CellKey cube(dim);
        for (const auto& [key, value] : k.body.cells()) {
            int sign = 1;
            for (int a = 0; a < dim; ++a) {
                cube[a] = floor_shift(key[a], shift);
                Flag f = a < k.m ? sig.a[a] : sig.b[a - k.m];
                if (f == Flag::Haar) sign *= haar_sign(key[a], cube[a], shift);
            }
            sums[cube] += sign > 0 ? value : -value;
        }
        // eqkerneldecomp normalization: every axis divides by its interval length.
        const Rational scale_factor = pow2(s * dim - res * dim);
        for (const auto& [cube_key, sum] : sums) {
            Rational nu = sum * scale_factor;
            std::vector<DyadicInterval> axes;
            for (int a = 0; a < dim; ++a) axes.push_back({s, cube_key[a]});
            out[DyadicCube(std::move(axes))] = nu;
        }
    }
    return out;
}

Decomposition decompose(const PerfectKernel& k) {
    Decomposition d;
    d.m = k.m;
    d.n = k.n;
    for (const auto& sig : all_signatures(k.m, k.n)) d.fields.push_back(haar_coefficients(k, sig));
    if (k.body.is_zero()) return d;
    const int dim = k.dimension();
    const std::int64_t res = k.resolution();
    const std::int64_t s_cov = k.covering_scale();
    const std::int64_t shift = res - s_cov;
    std::map<CellKey, Rational> sums;
    CellKey cube(dim);
    for (const auto& [key, value] : k.body.cells()) {
        for (int a = 0; a < dim; ++a) cube[a] = floor_shift(key[a], shift);
        sums[cube] += value;
    }
    const Rational to_mean = pow2(s_cov * dim - res * dim);
    for (const auto& [cube_key, sum] : sums) {
        if (sum == 0) continue;
        std::vector<DyadicInterval> axes;
        for (int a = 0; a < dim; ++a) axes.push_back({s_cov, cube_key[a]});
        d.scaling.push_back({DyadicCube(std::move(axes)), sum * to_mean});
    }
    return d;
}

StepFunction reconstruct_kernel(const Decomposition& d, std::int64_t res) {
    const int dim = d.m + d.n;
    StepFunction out(dim, res);
    for (const auto& term : d.scaling)
        out = out + StepFunction::constant_on(term.cube.intervals, res, term.mean);
    for (const auto& field : d.fields) {
        for (const auto& [q, lambda] : field.coeffs) {
            const std::int64_t s = q.scale();
            // Atom value: lambda * |I|^(2-m-n) * prod a_I(x_i) prod b_J(y_j).
            const Rational magnitude = lambda * pow2(s * (dim - 2));
            std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
            for (int a = 0; a < dim; ++a) {
                DyadicInterval I = a < d.m ? q.x : q.y;
                ranges.push_back(I.cell_range_at(res));
            }
            StepFunction::CellMap cells;
            CellKey key(dim);
            for (int a = 0; a < dim; ++a) key[a] = ranges[a].first;
            std::int64_t shift = res - s;
            while (true) {
                int sign = 1;
                for (int a = 0; a < dim; ++a) {
                    Flag f = a < d.m ? field.signature.a[a] : field.signature.b[a - d.m];
                    if (f == Flag::Haar)
                        sign *= haar_sign(key[a], floor_shift(key[a], shift), shift);
                }
                cells[key] = sign > 0 ? magnitude : -magnitude;
                int a = dim - 1;
                while (a >= 0 && ++key[a] == ranges[a].second) key[a] = ranges[a].first, --a;
                if (a < 0) break;
            }
            out = out + StepFunction(dim, res, std::move(cells));
        }
    }
    return out;
}

namespace {

// Bracket over a subset of axes/edges: the common VE core of the paraproduct
// term and its per-component version.
Rational bracket_value(const BipartiteGraph& g, const std::set<Edge>& edges,
                       const std::vector<int>& axes, const FunctionMap& fs, const Signature& sig,
                       const DyadicSquare& q) {
    std::int64_t res = q.scale() + 1;
    for (const auto& e : edges) res = std::max(res, fs.at(e).resolution());
    const std::int64_t s = q.scale();
    const std::int64_t shift = res - s;
    const std::int64_t width = std::int64_t(1) << shift;

    std::vector<Table> tables;
    auto range_of = [&](int axis) {
        const DyadicInterval& I = axis < g.m ? q.x : q.y;
        return I.cell_range_at(res);
    };
    for (const auto& e : edges) {
        const StepFunction& f = fs.at(e);
        int ax = e.first - 1, ay = g.m + e.second - 1;
        auto rx = range_of(ax), ry = range_of(ay);
        Table t;
        t.axes = {ax, ay};
        t.lo = {rx.first, ry.first};
        t.size = {width, width};
        t.data.assign(static_cast<std::size_t>(width * width), Rational(0));
        for (std::int64_t i = rx.first; i < rx.second; ++i)
            for (std::int64_t j = ry.first; j < ry.second; ++j) t.at({i, j}) = f.value_at({i, j}, res);
        tables.push_back(std::move(t));
    }
    for (int axis : axes) {
        Flag f = axis < g.m ? sig.a[axis] : sig.b[axis - g.m];
        auto r = range_of(axis);
        Table t;
        t.axes = {axis};
        t.lo = {r.first};
        t.size = {width};
        t.data.assign(static_cast<std::size_t>(width), Rational(1));
        if (f == Flag::Haar) {
            std::int64_t base = r.first;
            for (std::int64_t i = r.first; i < r.second; ++i)
                t.data[static_cast<std::size_t>(i - r.first)] =
                    haar_sign(i, floor_shift(base, shift), shift) > 0 ? 1 : -1;
        }
        tables.push_back(std::move(t));
    }
    // Cheapest order for these axes; fewest-incident-first falls out of the
    // exhaustive search on atomic structure.
    std::vector<int> order = axes;
    if (axes.size() <= 8) {
        std::vector<FactorSpec> specs;
        for (const auto& e : edges) specs.push_back({{e.first - 1, g.m + e.second - 1}, ""});
        for (int axis : axes) specs.push_back({{axis}, ""});
        std::vector<std::int64_t> widths(g.m + g.n, 1);
        for (int axis : axes) widths[axis] = width;
        std::vector<int> best = order;
        BigInt best_cost = elimination_cost(specs, widths, order);
        std::vector<int> perm = order;
        std::sort(perm.begin(), perm.end());
        do {
            BigInt c = elimination_cost(specs, widths, perm);
            if (c < best_cost) {
                best_cost = c;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        order = best;
    }
    Rational raw = eliminate_all(std::move(tables), order);
    // Normalize: each axis contributes 1/|interval| = 2^s, cells carry 2^-res.
    return raw * pow2(static_cast<std::int64_t>(axes.size()) * (s - res));
}

}  // namespace

Rational paraproduct_term(const BipartiteGraph& g, const FunctionMap& fs, const Signature& sig,
                          const DyadicSquare& q) {
    if (static_cast<int>(sig.a.size()) != g.m || static_cast<int>(sig.b.size()) != g.n)
        throw DimensionMismatch("signature arity does not match the graph");
    std::vector<int> axes(g.m + g.n);
    for (int a = 0; a < g.m + g.n; ++a) axes[a] = a;
    return bracket_value(g, g.edges, axes, fs, sig, q);
}

Rational paraproduct_term_component(const BipartiteGraph& g, const Component& comp,
                                    const FunctionMap& fs, const Signature& sig,
                                    const DyadicSquare& q) {
    std::vector<int> axes;
    for (int i : comp.xs) axes.push_back(i - 1);
    for (int j : comp.ys) axes.push_back(g.m + j - 1);
    std::sort(axes.begin(), axes.end());
    return bracket_value(g, comp.edges, axes, fs, sig, q);
}

Rational evaluate_paraproduct(const HaarCoefficientField& field, const BipartiteGraph& g,
                              const FunctionMap& fs) {
    Rational sum(0);
    for (const auto& [q, lambda] : field.coeffs)
        sum += lambda * q.measure() * paraproduct_term(g, fs, field.signature, q);
    return sum;
}

Rational evaluate_decomposition(const Decomposition& d, const BipartiteGraph& g,
                                const FunctionMap& fs) {
    Rational sum(0);
    for (const auto& field : d.fields) sum += evaluate_paraproduct(field, g, fs);
    for (const auto& term : d.scaling)
        sum += term.mean * entangled_product_integral(g, fs, term.cube.intervals);
    return sum;
}

ReconstructionReport reconstruct_check(const PerfectKernel& k, const BipartiteGraph& g,
                                       const FunctionMap& fs) {
    Rational direct = evaluate_form(k, g, fs);
    Rational structured = evaluate_decomposition(decompose(k), g, fs);
    ReconstructionReport report;
    report.residual = rational_abs(direct - structured);
    report.ok = report.residual == 0;
    return report;
}

namespace {

int quadrant_of(const DyadicSquare& q) {
    return (q.x.index < 0 ? 2 : 0) + (q.y.index < 0 ? 1 : 0);
}

Rational bmo_squared_of_masses(const std::map<DyadicSquare, Rational>& own) {
    if (own.empty()) return Rational(0);
    Rational quadrant_total[4] = {Rational(0), Rational(0), Rational(0), Rational(0)};
    for (const auto& [q, mass] : own) quadrant_total[quadrant_of(q)] += mass;

    // Group by scale, finest first; push cumulative masses up parent chains.
    std::map<std::int64_t, std::map<DyadicSquare, Rational>, std::greater<>> by_scale;
    for (const auto& [q, mass] : own) by_scale[q.scale()][q] = mass;
    Rational best(0);
    while (!by_scale.empty()) {
        auto node = by_scale.begin();
        auto [scale, level] = *node;
        by_scale.erase(node);
        for (const auto& [q, mass] : level) {
            best = std::max(best, mass / q.measure());
            if (mass == quadrant_total[quadrant_of(q)]) continue;  // chain stabilized
            by_scale[scale - 1][q.parent()] += mass;
        }
    }
    return best;
}

}  // namespace

CoefficientNorms coeff_norms(const HaarCoefficientField& field) {
    CoefficientNorms norms{Rational(0), Rational(0)};
    std::map<DyadicSquare, Rational> own;
    for (const auto& [q, lambda] : field.coeffs) {
        norms.linf = std::max(norms.linf, rational_abs(lambda));
        own[q] = q.measure() * lambda * lambda;
    }
    norms.bmo_squared = bmo_squared_of_masses(own);
    return norms;
}

Rational combined_bmo_squared(const std::vector<const HaarCoefficientField*>& fields) {
    std::map<DyadicSquare, Rational> own;
    for (const auto* field : fields)
        for (const auto& [q, lambda] : field->coeffs) own[q] += q.measure() * lambda * lambda;
    return bmo_squared_of_masses(own);
}

ConvexTree::ConvexTree(std::set<DyadicSquare> sq, DyadicSquare t) : squares(std::move(sq)), top(t) {
    if (!squares.count(top)) throw Error("ConvexTree: top must be a member");
    for (const auto& q : squares) {
        if (!top.contains(q)) throw Error("ConvexTree: member outside the top");
        DyadicSquare walk = q;
        while (walk != top) {
            walk = walk.parent();
            if (!squares.count(walk)) throw Error("ConvexTree: parent chain leaves the family");
        }
    }
}

std::set<DyadicSquare> tree_leaves(const ConvexTree& t) {
    std::set<DyadicSquare> leaves;
    for (const auto& q : t.squares)
        for (const auto& child : q.children())
            if (!t.squares.count(child)) leaves.insert(child);
    return leaves;
}

Rational localized_theta(const HaarCoefficientField& field, const BipartiteGraph& g,
                         const FunctionMap& fs, const ConvexTree& t) {
    Rational sum(0);
    for (const auto& q : t.squares) {
        Rational lambda = field.at(q);
        if (lambda == 0) continue;
        sum += rational_abs(lambda) * q.measure() *
               rational_abs(paraproduct_term(g, fs, field.signature, q));
    }
    return sum;
}

Rational power_mean_pow(const StepFunction& f, const DyadicSquare& q, int d) {
    return f.pow(d).integral_over_square(q) / q.measure();
}

RationalInterval single_tree_ratio(const HaarCoefficientField& field, const BipartiteGraph& g,
                                   const FunctionMap& fs, const ConvexTree& t,
                                   const ExponentAssignment& d) {
    for (const auto& [e, f] : fs)
        for (const auto& [key, value] : f.cells())
            if (value < 0) throw Error("single_tree_ratio: inputs must be nonnegative");
    Rational theta = localized_theta(field, g, fs, t);

    std::vector<DyadicSquare> candidates(t.squares.begin(), t.squares.end());
    for (const auto& leaf : tree_leaves(t)) candidates.push_back(leaf);

    RationalInterval denominator = RationalInterval::point(t.top.measure());
    for (const auto& e : g.edges) {
        int de = d.d.at(e);
        Rational best(0);
        for (const auto& q : candidates) best = std::max(best, power_mean_pow(fs.at(e), q, de));
        if (best == 0)
            throw ZeroDenominator("F(" + std::to_string(e.first) + "," + std::to_string(e.second) +
                                  ") vanishes on the tree");
        denominator = denominator * nth_root_interval(best, de);
    }
    return {theta / denominator.hi, theta / denominator.lo};
}

}  // namespace entangled
