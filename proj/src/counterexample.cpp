#include "entangled/counterexample.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "entangled/errors.hpp"

namespace entangled {

namespace {

void check_config(const CounterexampleConfig& cfg) {
    if (cfg.r < 1) throw Error("counterexample: r must be >= 1");
    if (cfg.n < 2) throw Error("counterexample: n must be >= 2");
}

}  // namespace

RadicalStepFunction::RadicalStepFunction(int r, int n) : r_(r), n_(n) {
    for (int l = 1; l <= r; ++l) {
        Rational base = pow2(l) / Rational(std::int64_t(l) * (l + 1));
        bands_.push_back({l, DyadicInterval{l, 1}, RadicalValue(base, Rational(1, n))});
    }
}

std::optional<RadicalValue> RadicalStepFunction::value_at(std::int64_t ix, std::int64_t iy) const {
    if (iy < 0 || iy >= (std::int64_t(1) << r_)) return std::nullopt;  // y outside [0,1)
    for (const auto& band : bands_) {
        auto [lo, hi] = band.x_band.cell_range_at(r_);
        if (ix >= lo && ix < hi) return band.value;
    }
    return std::nullopt;
}

Rational RadicalStepFunction::band_power(int level) const {
    std::vector<RadicalValue> copies(static_cast<std::size_t>(n_), bands_[level - 1].value);
    return radical_product(copies);
}

Rational RadicalStepFunction::ln_norm_pow() const {
    Rational sum(0);
    for (const auto& band : bands_) sum += band.x_band.measure() * band_power(band.level);
    return sum;
}

std::vector<RadicalStepFunction> build_functions(const CounterexampleConfig& cfg) {
    check_config(cfg);
    return std::vector<RadicalStepFunction>(static_cast<std::size_t>(cfg.n),
                                            RadicalStepFunction(cfg.r, cfg.n));
}

HaarCoefficientField counterexample_field(int r, int n) {
    if (r > 20) throw Error("counterexample_field: materialization capped at r = 20");
    std::vector<Flag> a{Flag::Haar};
    std::vector<Flag> b(static_cast<std::size_t>(n), Flag::Unit);
    HaarCoefficientField field{Signature(a, b), {}};
    for (int k = 0; k < r; ++k)
        for (std::int64_t j = 0; j < (std::int64_t(1) << k); ++j)
            field.coeffs[DyadicSquare{k, 0, j}] = 1;
    return field;
}

namespace {

// Inner sum of one square I_k x J: |J inter [0,1)|^n * int h_{I_k} f^n, with
// the n-fold products collapsed by radical_product.
Rational square_inner(const RadicalStepFunction& f, int n, int k, const DyadicInterval& J) {
    const DyadicInterval unit_y{0, 0};
    Rational y_factor = rational_pow(overlap_measure(J, unit_y), n);
    if (y_factor == 0) return Rational(0);
    Rational integral(0);
    const int r = static_cast<int>(f.resolution());
    // Right half of I_k = [0, 2^-k) is the band l = k+1; bands l >= k+2 fill
    // the left half; bands l <= k lie outside.
    for (int l = k + 2; l <= r; ++l) integral += pow2(-l) * f.band_power(l);
    if (k + 1 <= r) integral -= pow2(-(k + 1)) * f.band_power(k + 1);
    return y_factor * integral;
}

}  // namespace

Rational counterexample_lambda(const CounterexampleConfig& cfg) {
    check_config(cfg);
    RadicalStepFunction f(cfg.r, cfg.n);
    Rational total(0);
    for (int k = 0; k < cfg.r; ++k) {
        // All 2^k squares of scale k share the inner sum: the inputs are
        // y-constant on [0,1), so only |J| enters.
        Rational inner = square_inner(f, cfg.n, k, DyadicInterval{k, 0});
        total += pow2(k) * pow2(std::int64_t(k) * (cfg.n - 1)) * inner;
    }
    return total;
}

Rational counterexample_lambda_per_square(const CounterexampleConfig& cfg) {
    check_config(cfg);
    if (cfg.r > 10) throw Error("per-square evaluation capped at r = 10");
    RadicalStepFunction f(cfg.r, cfg.n);
    Rational total(0);
    for (int k = 0; k < cfg.r; ++k)
        for (std::int64_t j = 0; j < (std::int64_t(1) << k); ++j)
            total += pow2(std::int64_t(k) * (cfg.n - 1)) *
                     square_inner(f, cfg.n, k, DyadicInterval{k, j});
    return total;
}

Rational counterexample_series(int r) {
    Rational total(0);
    for (int k = 0; k < r; ++k) {
        Rational inner(0);
        for (int l = k + 2; l <= r; ++l) inner += Rational(1, std::int64_t(l) * (l + 1));
        inner -= Rational(1, std::int64_t(k + 1) * (k + 2));
        total += inner;
    }
    return total;
}

Rational counterexample_closed_form(int r) {
    Rational total(0);
    for (int k = 0; k < r; ++k) total += Rational(1, k + 2);
    return total - Rational(r - 1, r + 1) - 1 + Rational(1, r + 2);
}

Rational counterexample_bmo_squared(int r) {
    // Candidate tops must contain a support square, so their x-interval is
    // some [0, 2^-k0); the J position drops out by translation.
    Rational best(0);
    for (int k0 = 0; k0 < r; ++k0) {
        Rational mass(0);
        for (int k = k0; k < r; ++k) mass += pow2(k - k0) * pow2(-2 * k);
        best = std::max(best, mass * pow2(2 * k0));
    }
    return best;
}

StructuredWbp counterexample_wbp(int r, int n, int max_depth) {
    // Lambda(1_Q,...,1_Q) = sum over k < min(q, r) with I inside [0, 2^-k) of
    // +-  2^(k(n-1)) |Q'|^... ; for I of index i with bit length b the terms
    // are k <= q - max(b, 1), the finest of them negative exactly when b >= 1.
    StructuredWbp out{Rational(0), DyadicSquare{0, 0, 0}};
    for (std::int64_t q = 0; q <= max_depth; ++q) {
        for (std::int64_t b = 0; b <= q; ++b) {
            std::int64_t k_hi = std::min<std::int64_t>(r - 1, q - std::max<std::int64_t>(b, 1));
            if (k_hi < 0) continue;
            Rational sum(0);
            for (std::int64_t k = 0; k <= k_hi; ++k) {
                bool negative = b >= 1 && k == q - b;
                Rational term = pow2(k * (n - 1));
                sum += negative ? -term : term;
            }
            Rational ratio = rational_abs(sum) * pow2(q * (1 - n));
            if (ratio > out.max_ratio) {
                out.max_ratio = ratio;
                out.witness = DyadicSquare{q, b == 0 ? 0 : (std::int64_t(1) << (b - 1)), 0};
            }
        }
    }
    return out;
}

bool counterexample_size_check(int r, int n) {
    // Chain of bounds: |K| <= sum over J containing all y's of |J|^(1-n)
    // <= (min |J|)^(1-n) * 2^(n-1) / (2^(n-1) - 1), checked per class of the
    // minimal common scale k_y (stable beyond k_y = r - 1).
    Rational geometric = pow2(n - 1) / (pow2(n - 1) - 1);
    for (int ky = 0; ky <= r + 2; ++ky) {
        Rational lhs(0);
        for (int k = 0; k <= std::min(ky, r - 1); ++k) lhs += pow2(std::int64_t(k) * (n - 1));
        if (!(lhs <= pow2(std::int64_t(ky) * (n - 1)) * geometric)) return false;
    }
    return true;
}

CounterexampleReport run_counterexample(const CounterexampleConfig& cfg, bool dense_check) {
    check_config(cfg);
    CounterexampleReport rep;
    rep.r = cfg.r;
    rep.n = cfg.n;
    rep.lambda = counterexample_lambda(cfg);
    rep.series = counterexample_series(cfg.r);
    rep.series_match = rep.lambda == rep.series;
    rep.closed_form = counterexample_closed_form(cfg.r);
    rep.closed_form_match = rep.lambda == rep.closed_form;
    rep.closed_form_gap = rep.closed_form - rep.lambda;

    rep.f_norm_pow = RadicalStepFunction(cfg.r, cfg.n).ln_norm_pow();
    rep.f_norm_match = rep.f_norm_pow == Rational(1) - Rational(1, cfg.r + 1);

    rep.bmo_squared = counterexample_bmo_squared(cfg.r);
    rep.bmo_match = rep.bmo_squared == Rational(2) - pow2(1 - cfg.r);
    rep.bmo_le_2 = rep.bmo_squared <= 2;

    auto wbp = counterexample_wbp(cfg.r, cfg.n, cfg.r + 2);
    rep.wbp_ratio = wbp.max_ratio;
    rep.wbp_witness = wbp.witness;
    rep.wbp_le_1 = rep.wbp_ratio <= 1;

    rep.size_ok = counterexample_size_check(cfg.r, cfg.n);

    if (dense_check && cfg.r <= 3) {
        PerfectKernel k = counterexample_kernel(cfg.r, cfg.n);
        RadicalStepFunction f(cfg.r, cfg.n);
        Rational sum(0);
        for (const auto& [key, value] : k.body.cells()) {
            std::optional<RadicalValue> sample = f.value_at(key[0], key[1]);
            if (!sample) continue;
            bool supported = true;
            std::vector<RadicalValue> factors;
            for (int j = 0; j < cfg.n && supported; ++j) {
                auto v = f.value_at(key[0], key[1 + j]);
                if (!v)
                    supported = false;
                else
                    factors.push_back(*v);
            }
            if (!supported) continue;
            sum += value * radical_product(factors);
        }
        rep.dense_lambda = sum * pow2(-k.resolution() * (1 + cfg.n));
        rep.dense_match = *rep.dense_lambda == rep.lambda;
    }
    return rep;
}

DivergenceTable divergence_table(int r_max, int n, bool dense_check_small, int threads) {
    if (r_max < 1 || r_max > 24) throw Error("divergence_table: r_max must be in [1, 24]");
    DivergenceTable table;
    table.rows.resize(static_cast<std::size_t>(r_max));
    threads = std::max(1, std::min(threads, r_max));
    if (threads == 1) {
        for (int r = 1; r <= r_max; ++r)
            table.rows[static_cast<std::size_t>(r) - 1] =
                run_counterexample({r, n}, dense_check_small && r <= 3);
    } else {
        std::atomic<int> next{1};
        auto worker = [&] {
            for (int r = next.fetch_add(1); r <= r_max; r = next.fetch_add(1))
                table.rows[static_cast<std::size_t>(r) - 1] =
                    run_counterexample({r, n}, dense_check_small && r <= 3);
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    table.lambda_increasing_from_2 = true;
    table.hypotheses_hold = true;
    for (int r = 1; r <= r_max; ++r) {
        const auto& row = table.rows[static_cast<std::size_t>(r) - 1];
        table.hypotheses_hold =
            table.hypotheses_hold && row.wbp_le_1 && row.bmo_le_2 && row.size_ok;
        if (r >= 3 && !(row.lambda > table.rows[static_cast<std::size_t>(r) - 2].lambda))
            table.lambda_increasing_from_2 = false;
    }
    return table;
}

}  // namespace entangled
