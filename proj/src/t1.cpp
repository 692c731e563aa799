#include "entangled/t1.hpp"

#include <algorithm>

#include "entangled/errors.hpp"

namespace entangled {

Rational bmo_seminorm_squared(const StepFunction& f) {
    if (f.dimension() != 2) throw DimensionMismatch("bmo_seminorm_squared: 2D only");
    if (f.is_zero()) return Rational(0);
    const Rational total2 = f.l2_norm_squared();
    const std::int64_t res = f.resolution();
    const Rational cell = f.cell_measure();

    // Per-square (integral, integral of F^2), aggregated scale by scale.
    std::map<std::pair<std::int64_t, std::int64_t>, std::pair<Rational, Rational>> level;
    for (const auto& [key, value] : f.cells()) {
        auto& slot = level[{key[0], key[1]}];
        slot.first += value * cell;
        slot.second += value * value * cell;
    }
    Rational best(0);
    for (std::int64_t s = res;; --s) {
        const Rational measure = pow2(-2 * s);
        for (const auto& [sq, sums] : level) {
            // |Q|^-1 int_Q (F - mean)^2 = I2/|Q| - (I1/|Q|)^2.
            Rational osc = sums.second / measure - (sums.first / measure) * (sums.first / measure);
            best = std::max(best, osc);
        }
        // Certified cutoff: at scale s-1 and coarser, oscillation <= ||F||^2/|Q|.
        if (total2 * pow2(2 * (s - 1)) <= best) break;
        std::map<std::pair<std::int64_t, std::int64_t>, std::pair<Rational, Rational>> up;
        for (const auto& [sq, sums] : level) {
            auto& slot = up[{floor_shift(sq.first, 1), floor_shift(sq.second, 1)}];
            slot.first += sums.first;
            slot.second += sums.second;
        }
        level = std::move(up);
    }
    return best;
}

namespace {

// One scale of the scan: every square whose cube meets the support, with
// Lambda(1_Q,...,1_Q) = integral of K over I^m x J^n.
void scan_scale(const PerfectKernel& k, std::int64_t s, const DyadicSquare* region,
                WbpResult& result) {
    const int dim = k.dimension();
    const std::int64_t res = k.resolution();
    const std::int64_t shift = res - s;
    std::map<std::pair<std::int64_t, std::int64_t>, Rational> sums;
    for (const auto& [key, value] : k.body.cells()) {
        std::int64_t ix = floor_shift(key[0], shift);
        bool aligned = true;
        for (int a = 1; a < k.m && aligned; ++a) aligned = floor_shift(key[a], shift) == ix;
        std::int64_t jy = floor_shift(key[k.m], shift);
        for (int a = k.m + 1; a < dim && aligned; ++a)
            aligned = floor_shift(key[a], shift) == jy;
        if (aligned) sums[{ix, jy}] += value;
    }
    const Rational lambda_factor = pow2(-res * dim);
    const Rational inv_measure = pow2(2 * s);
    for (const auto& [sq, sum] : sums) {
        DyadicSquare q{s, sq.first, sq.second};
        if (region && !region->contains(q)) continue;
        Rational ratio = rational_abs(sum * lambda_factor) * inv_measure;
        if (ratio > result.max_ratio) {
            result.max_ratio = ratio;
            result.witness = q;
        }
    }
}

}  // namespace

WbpResult weak_boundedness_scan(const PerfectKernel& k, const BipartiteGraph& g,
                                const DyadicSquare& region, int max_depth) {
    if (k.m != g.m || k.n != g.n) throw DimensionMismatch("weak_boundedness_scan: graph mismatch");
    WbpResult result;
    result.max_ratio = 0;
    if (k.body.is_zero()) return result;
    const std::int64_t res = k.resolution();
    auto xr = *k.x_support_range();
    auto yr = *k.y_support_range();
    auto covers = [&](const DyadicInterval& I, std::pair<std::int64_t, std::int64_t> r) {
        auto cr = I.cell_range_at(res);
        return cr.first <= r.first && r.second <= cr.second;
    };
    if (region.scale() > res || !covers(region.x, xr) || !covers(region.y, yr))
        throw Error("weak_boundedness_scan: region must cover the kernel support");

    result.finest_scanned = std::min<std::int64_t>(res, region.scale() + max_depth);
    result.coarsest_scanned = region.scale();
    for (std::int64_t s = region.scale(); s <= result.finest_scanned; ++s)
        scan_scale(k, s, &region, result);
    return result;
}

WbpResult weak_boundedness_scan(const PerfectKernel& k, const BipartiteGraph& g, int max_depth) {
    if (k.m != g.m || k.n != g.n) throw DimensionMismatch("weak_boundedness_scan: graph mismatch");
    WbpResult result;
    result.max_ratio = 0;
    if (k.body.is_zero()) return result;
    const std::int64_t res = k.resolution();
    const std::int64_t start = std::min(k.covering_scale(), res);
    const Rational total_abs = k.body.abs().integral();
    result.finest_scanned = std::min<std::int64_t>(res, start + max_depth);
    // Below the covering scale the aligned-cube integrals repeat per sign
    // class while |Q| grows, so scanning down to covering - 1 is complete;
    // the certified bound |Lambda|/|Q| <= int|K| * 2^(2s) cuts earlier.
    for (std::int64_t s = result.finest_scanned; s >= start - 1; --s) {
        scan_scale(k, s, nullptr, result);
        result.coarsest_scanned = s;
        if (total_abs * pow2(2 * (s - 1)) <= result.max_ratio) break;
    }
    return result;
}

StepFunction adjoint_of_ones(const PerfectKernel& k, const BipartiteGraph& g, Edge uv, int pad) {
    auto [xr, yr] = k.padded_box(pad);
    StepFunction ones = StepFunction::constant_on_cells(2, k.resolution(), {xr, yr}, Rational(1));
    FunctionMap fs;
    for (const auto& e : g.edges)
        if (e != uv) fs.emplace(e, ones);
    return evaluate_adjoint(k, g, uv, fs);
}

Rational t1_bmo(const PerfectKernel& k, const BipartiteGraph& g, Edge uv) {
    StepFunction t = adjoint_of_ones(k, g, uv, 1);
    StepFunction t_wide = adjoint_of_ones(k, g, uv, 2);
    if (!(t == t_wide)) throw Error("t1_bmo: adjoint of ones depends on the padded box");
    return bmo_seminorm_squared(t);
}

Rational restricted_test(const PerfectKernel& k, const BipartiteGraph& g, Edge uv,
                         const DyadicSquare& q) {
    if (!g.has_edge(uv.first, uv.second))
        throw EdgeNotInGraph("(" + std::to_string(uv.first) + "," + std::to_string(uv.second) + ")");
    const std::int64_t res = std::max(k.resolution(), q.scale());
    StepFunction ind = StepFunction::indicator_square(q, res);
    FunctionMap fs;
    for (const auto& e : g.edges)
        if (e != uv) fs.emplace(e, ind);
    StepFunction t = evaluate_adjoint(k, g, uv, fs);
    return t.l1_norm_over({q.x, q.y}) / q.measure();
}

ModulationFamily ModulationFamily::trivial(const BipartiteGraph& g, const DyadicSquare& q,
                                           std::int64_t res) {
    ModulationFamily fam;
    fam.q = q;
    for (const auto& e : g.edges) {
        fam.a.emplace(e, StepFunction::indicator({q.x}, res));
        fam.b.emplace(e, StepFunction::indicator({q.y}, res));
    }
    return fam;
}

void validate_family(const ModulationFamily& fam, const BipartiteGraph& g) {
    auto check_side = [&](bool x_side) {
        int count = x_side ? g.m : g.n;
        const DyadicInterval& I = x_side ? fam.q.x : fam.q.y;
        for (int v = 1; v <= count; ++v) {
            StepFunction prod;
            bool first = true;
            for (const auto& e : g.edges) {
                if ((x_side ? e.first : e.second) != v) continue;
                const auto& map = x_side ? fam.a : fam.b;
                auto it = map.find(e);
                if (it == map.end())
                    throw InvalidFamily("missing factor for edge (" + std::to_string(e.first) +
                                        "," + std::to_string(e.second) + ")");
                // Each factor must vanish outside its interval.
                Rational inside = it->second.l1_norm_over({I});
                Rational everywhere = it->second.abs().integral();
                if (inside != everywhere)
                    throw InvalidFamily("factor supported outside the square on edge (" +
                                        std::to_string(e.first) + "," + std::to_string(e.second) +
                                        ")");
                prod = first ? it->second : prod * it->second;
                first = false;
            }
            std::int64_t res = std::max(prod.resolution(), I.scale);
            if (!(prod == StepFunction::indicator({I}, res)))
                throw InvalidFamily(std::string("product constraint fails for ") +
                                    (x_side ? "x" : "y") + std::to_string(v));
        }
    };
    check_side(true);
    check_side(false);
}

CheckResult modulation_invariance_check(const ModulationFamily& fam, const PerfectKernel& k,
                                        const BipartiteGraph& g, Edge uv) {
    if (!g.has_edge(uv.first, uv.second))
        throw EdgeNotInGraph("(" + std::to_string(uv.first) + "," + std::to_string(uv.second) + ")");
    validate_family(fam, g);
    FunctionMap bs, inds;
    std::int64_t res = std::max(k.resolution(), fam.q.scale());
    for (const auto& e : g.edges) {
        bs.emplace(e, tensor(fam.a.at(e), fam.b.at(e)));
        res = std::max(res, bs.at(e).resolution());
        inds.emplace(e, StepFunction::indicator_square(fam.q, std::max(k.resolution(), fam.q.scale())));
    }
    StepFunction lhs = evaluate_adjoint(k, g, uv, bs) * bs.at(uv);
    StepFunction rhs = evaluate_adjoint(k, g, uv, inds) * inds.at(uv);
    CheckResult out;
    out.residual = (lhs - rhs).max_abs();
    out.ok = out.residual == 0;
    return out;
}

namespace {

// Max over the cells of Q of |f - c| treating absent cells as zero.
Rational max_abs_minus_constant_on(const StepFunction& f, const DyadicSquare& q,
                                   const Rational& c) {
    std::int64_t res = std::max(f.resolution(), q.scale());
    StepFunction constant = StepFunction::constant_on({q.x, q.y}, res, c);
    StepFunction window = StepFunction::indicator_square(q, res);
    return ((f - constant) * window).max_abs();
}

}  // namespace

CheckResult local_constancy_check(const PerfectKernel& k, const BipartiteGraph& g, Edge uv,
                                  const DyadicSquare& q) {
    StepFunction t_ones = adjoint_of_ones(k, g, uv);
    const std::int64_t res = std::max(k.resolution(), q.scale());
    StepFunction ind = StepFunction::indicator_square(q, res);
    FunctionMap fs;
    for (const auto& e : g.edges)
        if (e != uv) fs.emplace(e, ind);
    StepFunction t_q = evaluate_adjoint(k, g, uv, fs);

    Rational mean_ones = t_ones.integral_over_square(q) / q.measure();
    Rational mean_q = t_q.integral_over_square(q) / q.measure();
    CheckResult out;
    out.residual = max_abs_minus_constant_on(t_ones - t_q, q, mean_ones - mean_q);
    out.ok = out.residual == 0;
    return out;
}

NecessityReport necessity_checks(const PerfectKernel& k, const BipartiteGraph& g, Edge uv,
                                 const DyadicSquare& q) {
    const std::int64_t res = std::max(k.resolution(), q.scale());
    StepFunction ind = StepFunction::indicator_square(q, res);
    FunctionMap all, others;
    for (const auto& e : g.edges) {
        all.emplace(e, ind);
        if (e != uv) others.emplace(e, ind);
    }
    NecessityReport report;
    report.lambda_abs = rational_abs(evaluate_form(k, g, all));
    StepFunction t_q = evaluate_adjoint(k, g, uv, others);
    report.l1_test = t_q.l1_norm_over({q.x, q.y});

    StepFunction t_ones = adjoint_of_ones(k, g, uv);
    Rational mean = t_ones.integral_over_square(q) / q.measure();
    StepFunction centered =
        (t_ones - StepFunction::constant_on({q.x, q.y}, std::max(t_ones.resolution(), res), mean));
    report.oscillation_l1 = centered.l1_norm_over({q.x, q.y}) / q.measure();
    report.twice_restricted = Rational(2) * t_q.l1_norm_over({q.x, q.y}) / q.measure();
    report.ok = report.lambda_abs <= report.l1_test &&
                report.oscillation_l1 <= report.twice_restricted;
    return report;
}

bool jensen_l1_lp_check(const PerfectKernel& k, const BipartiteGraph& g, Edge uv,
                        const DyadicSquare& q, int pprime) {
    if (pprime < 1) throw Error("jensen_l1_lp_check: p' must be >= 1");
    const std::int64_t res = std::max(k.resolution(), q.scale());
    StepFunction ind = StepFunction::indicator_square(q, res);
    FunctionMap others;
    for (const auto& e : g.edges)
        if (e != uv) others.emplace(e, ind);
    StepFunction t = evaluate_adjoint(k, g, uv, others).abs();
    Rational mean_l1 = t.l1_norm_over({q.x, q.y}) / q.measure();
    Rational mean_lp = t.pow(pprime).integral_over_square(q) / q.measure();
    return rational_pow(mean_l1, pprime) <= mean_lp;
}

}  // namespace entangled
