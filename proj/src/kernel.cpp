#include "entangled/kernel.hpp"

#include <algorithm>
#include <map>

#include "entangled/errors.hpp"

namespace entangled {

PerfectKernel::PerfectKernel(int m_, int n_, StepFunction body_, std::optional<Rational> declared)
    : m(m_), n(n_), body(std::move(body_)), declared_size_constant(std::move(declared)) {
    if (m < 1 || n < 1) throw Error("PerfectKernel: m, n must be >= 1");
    if (body.dimension() != m + n)
        throw DimensionMismatch("PerfectKernel: body dimension must be m + n");
}

static std::optional<std::pair<std::int64_t, std::int64_t>> merged_range(const StepFunction& f,
                                                                         int from, int to) {
    std::optional<std::pair<std::int64_t, std::int64_t>> out;
    for (int a = from; a < to; ++a) {
        auto r = f.support_range(a);
        if (!r) return std::nullopt;
        if (!out)
            out = r;
        else
            out = std::make_pair(std::min(out->first, r->first), std::max(out->second, r->second));
    }
    return out;
}

std::optional<std::pair<std::int64_t, std::int64_t>> PerfectKernel::x_support_range() const {
    return merged_range(body, 0, m);
}

std::optional<std::pair<std::int64_t, std::int64_t>> PerfectKernel::y_support_range() const {
    return merged_range(body, m, m + n);
}

std::int64_t PerfectKernel::covering_scale() const {
    std::int64_t s = resolution();
    for (int a = 0; a < dimension(); ++a)
        for (const auto& I : body.support_cover(a)) s = std::min(s, I.scale);
    return s;
}

std::pair<std::pair<std::int64_t, std::int64_t>, std::pair<std::int64_t, std::int64_t>>
PerfectKernel::padded_box(int pad) const {
    auto padded = [&](std::pair<std::int64_t, std::int64_t> r) {
        std::int64_t width = std::max<std::int64_t>(r.second - r.first, 1);
        return std::make_pair(r.first - pad * width, r.second + pad * width);
    };
    auto xr = x_support_range().value_or(std::make_pair<std::int64_t, std::int64_t>(0, 1));
    auto yr = y_support_range().value_or(std::make_pair<std::int64_t, std::int64_t>(0, 1));
    return {padded(xr), padded(yr)};
}

DiagonalReport validate_diagonal_constancy(const PerfectKernel& k) {
    DiagonalReport report;
    const StepFunction& body = k.body;
    if (body.is_zero()) return report;
    const int dim = k.dimension();
    const std::int64_t res = k.resolution();
    const std::int64_t coarsest = k.covering_scale() - 1;

    for (std::int64_t s = res - 1; s >= coarsest; --s) {
        std::int64_t shift = res - s;
        // One pass over the nonzero cells: group them by containing cube.
        struct CubeState {
            Rational value;
            BigInt count;
            bool mixed = false;
        };
        std::map<CellKey, CubeState> cubes;
        for (const auto& [key, value] : body.cells()) {
            CellKey cube(dim);
            for (int a = 0; a < dim; ++a) cube[a] = floor_shift(key[a], shift);
            auto [it, fresh] = cubes.try_emplace(std::move(cube), CubeState{value, 1, false});
            if (!fresh) {
                it->second.count += 1;
                if (it->second.value != value) it->second.mixed = true;
            }
        }
        BigInt full_count = BigInt(1) << static_cast<unsigned>(shift * dim);
        for (const auto& [cube_key, state] : cubes) {
            bool x_equal = true, y_equal = true;
            for (int a = 1; a < k.m; ++a) x_equal = x_equal && cube_key[a] == cube_key[0];
            for (int a = k.m + 1; a < dim; ++a) y_equal = y_equal && cube_key[a] == cube_key[k.m];
            if (x_equal && y_equal) continue;  // cube meets the diagonal
            // Constant over the cube means: one value on all present cells and
            // no absent (zero) cell, since present values are nonzero.
            if (!state.mixed && state.count == full_count) continue;
            std::vector<DyadicInterval> axes;
            for (int a = 0; a < dim; ++a) axes.push_back({s, cube_key[a]});
            // value_b stays 0 when the offending second value is an absent cell.
            report.violations.push_back({DyadicCube(axes), state.value, Rational(0)});
            if (state.mixed) {
                for (const auto& [key, value] : body.cells()) {
                    bool inside = true;
                    for (int a = 0; a < dim && inside; ++a)
                        inside = floor_shift(key[a], shift) == cube_key[a];
                    if (inside && value != state.value) {
                        report.violations.back().value_b = value;
                        break;
                    }
                }
            }
        }
    }
    return report;
}

SizeReport size_constant_report(const PerfectKernel& k) {
    if (k.dimension() < 3) throw Error("size_constant: requires m + n >= 3");
    SizeReport report;
    report.constant = 0;
    const int dim = k.dimension();
    const std::int64_t res = k.resolution();
    const Rational unit = pow2(-res * (dim - 2));  // corner units of 2^-res
    for (const auto& [key, value] : k.body.cells()) {
        bool x_equal = true, y_equal = true;
        for (int a = 1; a < k.m; ++a) x_equal = x_equal && key[a] == key[0];
        for (int a = k.m + 1; a < dim; ++a) y_equal = y_equal && key[a] == key[k.m];
        if (x_equal && y_equal) report.vacuous_cells.push_back(key);

        std::optional<BigInt> min_units;
        for (unsigned corner = 0; corner < (1u << dim); ++corner) {
            BigInt dist = 0;
            auto coord = [&](int a) { return key[a] + ((corner >> a) & 1); };
            for (int i1 = 0; i1 < k.m; ++i1)
                for (int i2 = i1 + 1; i2 < k.m; ++i2)
                    dist += boost::multiprecision::abs(BigInt(coord(i1) - coord(i2)));
            for (int j1 = k.m; j1 < dim; ++j1)
                for (int j2 = j1 + 1; j2 < dim; ++j2)
                    dist += boost::multiprecision::abs(BigInt(coord(j1) - coord(j2)));
            if (dist == 0) continue;  // corner on the diagonal
            if (!min_units || dist < *min_units) min_units = dist;
        }
        if (!min_units) continue;  // every corner on D; cell unconstrained
        BigInt w = 1;
        for (int e = 0; e < dim - 2; ++e) w *= *min_units;
        Rational candidate = rational_abs(value) * Rational(w) * unit;
        report.constant = std::max(report.constant, candidate);
    }
    return report;
}

Rational size_constant(const PerfectKernel& k) { return size_constant_report(k).constant; }

PerfectKernel kernel_from_difference(const StepFunction& kappa,
                                     const std::vector<DyadicInterval>& support_box) {
    if (kappa.dimension() != 2) throw DimensionMismatch("kernel_from_difference: kappa must be 2D");
    if (support_box.size() != 4)
        throw DimensionMismatch("kernel_from_difference: need a 4-axis support box");
    const std::int64_t res = kappa.resolution();
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    for (const auto& I : support_box) ranges.push_back(I.cell_range_at(res));
    StepFunction::CellMap cells;
    CellKey key(4);
    for (int a = 0; a < 4; ++a) key[a] = ranges[a].first;
    while (true) {
        Rational v = kappa.value_at({key[0] - key[1], key[2] - key[3]});
        if (v != 0) cells[key] = v;
        int a = 3;
        while (a >= 0 && ++key[a] == ranges[a].second) key[a] = ranges[a].first, --a;
        if (a < 0) break;
    }
    return PerfectKernel(2, 2, StepFunction(4, res, std::move(cells)));
}

PerfectKernel counterexample_kernel(int r, int n) {
    if (r < 1) throw Error("counterexample_kernel: r must be >= 1");
    if (n < 2) throw Error("counterexample_kernel: n must be >= 2");
    if (r * (1 + n) > 22) throw Error("counterexample_kernel: dense grid too large; desk scale only");
    const int dim = 1 + n;
    const std::int64_t res = r;
    const std::int64_t cells_per_axis = std::int64_t(1) << r;
    StepFunction::CellMap cells;
    CellKey key(dim, 0);
    while (true) {
        // Finest scale k at which all y-cells share one dyadic interval.
        std::int64_t common = res;
        for (int a = 2; a < dim; ++a) {
            std::int64_t x = key[1] ^ key[a];
            std::int64_t bits = 0;
            while (x > 0) x >>= 1, ++bits;
            common = std::min(common, res - bits);
        }
        Rational v(0);
        for (std::int64_t k = 0; k <= std::min<std::int64_t>(common, r - 1); ++k) {
            if (key[0] >= (std::int64_t(1) << (r - k))) continue;   // x outside [0, 2^-k)
            bool left = key[0] < (std::int64_t(1) << (r - k - 1));  // left half of I_k
            Rational term = pow2(k * (n - 1));
            v += left ? term : -term;
        }
        if (v != 0) cells[key] = v;
        int a = dim - 1;
        while (a >= 0 && ++key[a] == cells_per_axis) key[a] = 0, --a;
        if (a < 0) break;
    }
    return PerfectKernel(1, n, StepFunction(dim, res, std::move(cells)));
}

}  // namespace entangled
