#include "entangled/contraction.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "entangled/errors.hpp"

namespace entangled {

std::vector<FactorSpec> contraction_factors(const BipartiteGraph& g, KernelStructure structure) {
    std::vector<FactorSpec> out;
    for (const auto& [i, j] : g.edges)
        out.push_back({{i - 1, g.m + j - 1},
                       "F(" + std::to_string(i) + "," + std::to_string(j) + ")"});
    if (structure == KernelStructure::Atomic) {
        for (int a = 0; a < g.m + g.n; ++a)
            out.push_back({{a}, std::string("K[") + (a < g.m ? "x" : "y") +
                                    std::to_string(a < g.m ? a + 1 : a - g.m + 1) + "]"});
    } else {
        std::vector<int> all(g.m + g.n);
        std::iota(all.begin(), all.end(), 0);
        out.push_back({all, "K"});
    }
    return out;
}

static BigInt table_size(const std::vector<int>& scope, const std::vector<std::int64_t>& widths) {
    BigInt size = 1;
    for (int a : scope) size *= widths[a];
    return size;
}

BigInt elimination_cost(const std::vector<FactorSpec>& factors,
                        const std::vector<std::int64_t>& widths, const std::vector<int>& order) {
    std::vector<std::vector<int>> scopes;
    for (const auto& f : factors) scopes.push_back(f.scope);
    BigInt total = 0;
    for (int axis : order) {
        std::set<int> joint;
        int participating = 0;
        std::vector<std::vector<int>> rest;
        for (auto& s : scopes) {
            if (std::find(s.begin(), s.end(), axis) != s.end()) {
                joint.insert(s.begin(), s.end());
                ++participating;
            } else {
                rest.push_back(std::move(s));
            }
        }
        if (participating == 0) continue;
        std::vector<int> joint_scope(joint.begin(), joint.end());
        // A single participating factor fuses into the step that produced it:
        // the sum-out accumulates in place, no extra multiply-adds.
        if (participating > 1) total += table_size(joint_scope, widths) * participating;
        joint_scope.erase(std::remove(joint_scope.begin(), joint_scope.end(), axis),
                          joint_scope.end());
        rest.push_back(std::move(joint_scope));
        scopes = std::move(rest);
    }
    return total;
}

BigInt naive_cost(const std::vector<FactorSpec>& factors, const std::vector<std::int64_t>& widths) {
    std::set<int> all;
    for (const auto& f : factors) all.insert(f.scope.begin(), f.scope.end());
    return table_size({all.begin(), all.end()}, widths) * static_cast<int>(factors.size());
}

static std::vector<PlanStep> plan_steps(const std::vector<FactorSpec>& factors,
                                        const std::vector<std::int64_t>& widths,
                                        const std::vector<int>& order) {
    struct Live {
        std::vector<int> scope;
        int id;
    };
    std::vector<Live> live;
    for (int f = 0; f < static_cast<int>(factors.size()); ++f) live.push_back({factors[f].scope, f});
    int next_id = static_cast<int>(factors.size());
    std::vector<PlanStep> steps;
    for (int axis : order) {
        PlanStep step;
        step.axis = axis;
        std::set<int> joint;
        std::vector<Live> rest;
        for (auto& l : live) {
            if (std::find(l.scope.begin(), l.scope.end(), axis) != l.scope.end()) {
                joint.insert(l.scope.begin(), l.scope.end());
                step.factors.push_back(l.id);
            } else {
                rest.push_back(std::move(l));
            }
        }
        if (step.factors.empty()) continue;
        std::vector<int> joint_scope(joint.begin(), joint.end());
        step.cost = step.factors.size() > 1
                        ? table_size(joint_scope, widths) * static_cast<int>(step.factors.size())
                        : BigInt(0);
        joint_scope.erase(std::remove(joint_scope.begin(), joint_scope.end(), axis),
                          joint_scope.end());
        step.result_scope = joint_scope;
        rest.push_back({joint_scope, next_id++});
        live = std::move(rest);
        steps.push_back(std::move(step));
    }
    return steps;
}

ContractionPlan plan_contraction(const BipartiteGraph& g, KernelStructure structure,
                                 const std::vector<std::int64_t>& widths) {
    const int axes = g.m + g.n;
    if (static_cast<int>(widths.size()) != axes)
        throw DimensionMismatch("plan_contraction: one width per axis required");
    auto factors = contraction_factors(g, structure);
    ContractionPlan plan;
    plan.naive_cost = naive_cost(factors, widths);

    std::vector<int> order(axes);
    std::iota(order.begin(), order.end(), 0);
    if (axes <= 8) {
        std::vector<int> best = order;
        BigInt best_cost = elimination_cost(factors, widths, order);
        while (std::next_permutation(order.begin(), order.end())) {
            BigInt c = elimination_cost(factors, widths, order);
            if (c < best_cost) {
                best_cost = c;
                best = order;
            }
        }
        plan.order = best;
        plan.predicted_cost = best_cost;
    } else {
        // Greedy: repeatedly eliminate the axis with the fewest incident
        // factors, lowest index first.
        std::vector<std::vector<int>> scopes;
        for (const auto& f : factors) scopes.push_back(f.scope);
        std::vector<bool> done(axes, false);
        for (int round = 0; round < axes; ++round) {
            int best_axis = -1, best_count = -1;
            for (int a = 0; a < axes; ++a) {
                if (done[a]) continue;
                int count = 0;
                for (const auto& s : scopes)
                    count += std::find(s.begin(), s.end(), a) != s.end();
                if (best_axis < 0 || count < best_count) {
                    best_axis = a;
                    best_count = count;
                }
            }
            done[best_axis] = true;
            plan.order.push_back(best_axis);
            std::set<int> joint;
            std::vector<std::vector<int>> rest;
            for (auto& s : scopes) {
                if (std::find(s.begin(), s.end(), best_axis) != s.end())
                    joint.insert(s.begin(), s.end());
                else
                    rest.push_back(std::move(s));
            }
            std::vector<int> joint_scope(joint.begin(), joint.end());
            joint_scope.erase(std::remove(joint_scope.begin(), joint_scope.end(), best_axis),
                              joint_scope.end());
            rest.push_back(std::move(joint_scope));
            scopes = std::move(rest);
        }
        plan.predicted_cost = elimination_cost(factors, widths, plan.order);
    }
    plan.steps = plan_steps(factors, widths, plan.order);
    return plan;
}

Rational& Table::at(const std::vector<std::int64_t>& point) {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < axes.size(); ++d)
        flat = flat * static_cast<std::size_t>(size[d]) + static_cast<std::size_t>(point[d] - lo[d]);
    return data[flat];
}

Rational eliminate_all(std::vector<Table> tables, const std::vector<int>& order) {
    for (int axis : order) {
        std::vector<Table> participating, rest;
        for (auto& t : tables) {
            if (std::find(t.axes.begin(), t.axes.end(), axis) != t.axes.end())
                participating.push_back(std::move(t));
            else
                rest.push_back(std::move(t));
        }
        if (participating.empty()) continue;
        // Joint scope (ascending) with per-axis geometry from the inputs.
        Table joint;
        for (const auto& t : participating)
            for (std::size_t d = 0; d < t.axes.size(); ++d) {
                auto it = std::lower_bound(joint.axes.begin(), joint.axes.end(), t.axes[d]);
                if (it == joint.axes.end() || *it != t.axes[d]) {
                    std::size_t pos = it - joint.axes.begin();
                    joint.axes.insert(it, t.axes[d]);
                    joint.lo.insert(joint.lo.begin() + pos, t.lo[d]);
                    joint.size.insert(joint.size.begin() + pos, t.size[d]);
                }
            }
        Table result;
        for (std::size_t d = 0; d < joint.axes.size(); ++d) {
            if (joint.axes[d] == axis) continue;
            result.axes.push_back(joint.axes[d]);
            result.lo.push_back(joint.lo[d]);
            result.size.push_back(joint.size[d]);
        }
        std::size_t result_cells = 1;
        for (auto s : result.size) result_cells *= static_cast<std::size_t>(s);
        result.data.assign(result_cells, Rational(0));

        std::vector<std::int64_t> point(joint.axes.size());
        for (std::size_t d = 0; d < joint.axes.size(); ++d) point[d] = joint.lo[d];
        std::vector<std::int64_t> sub;
        while (true) {
            Rational prod(1);
            for (auto& t : participating) {
                sub.clear();
                for (int a : t.axes)
                    sub.push_back(point[std::lower_bound(joint.axes.begin(), joint.axes.end(), a) -
                                        joint.axes.begin()]);
                prod *= t.at(sub);
                if (prod == 0) break;
            }
            if (prod != 0) {
                sub.clear();
                for (std::size_t d = 0; d < joint.axes.size(); ++d)
                    if (joint.axes[d] != axis) sub.push_back(point[d]);
                result.at(sub) += prod;
            }
            int d = static_cast<int>(joint.axes.size()) - 1;
            while (d >= 0 && ++point[d] == joint.lo[d] + joint.size[d]) point[d] = joint.lo[d], --d;
            if (d < 0) break;
        }
        rest.push_back(std::move(result));
        tables = std::move(rest);
    }
    Rational out(1);
    for (auto& t : tables) {
        if (!t.axes.empty()) throw Error("eliminate_all: axes left after elimination");
        out *= t.data.empty() ? Rational(0) : t.data.front();
    }
    return out;
}

}  // namespace entangled
