#include "amc/engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "amc/bounded_sat.hpp"

namespace amc {

namespace {

void check_epsilon(double epsilon)
{
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
}

void check_delta(double delta)
{
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
}

} // namespace

void ApproxParams::validate() const
{
    check_epsilon(epsilon);
    check_delta(delta);
    if (chunk_width < 2) throw std::invalid_argument("chunk width must be at least 2");
}

std::uint32_t compute_threshold(double epsilon)
{
    check_epsilon(epsilon);
    const long double e = epsilon;
    const long double base = 1.0L + 1.0L / e;
    return static_cast<std::uint32_t>(std::ceil(3.0L * std::sqrt(std::exp(1.0L)) * base * base));
}

std::uint32_t compute_pivot(double epsilon)
{
    const std::uint32_t pivot = 2 * compute_threshold(epsilon);
    if (pivot < 40) throw std::logic_error("pivot below 40 for epsilon <= 1");
    return pivot;
}

std::uint32_t compute_iter_count_formula(double delta)
{
    check_delta(delta);
    return static_cast<std::uint32_t>(std::ceil(35.0L * std::log2(3.0L / static_cast<long double>(delta))));
}

Rational exact_rational(double x)
{
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no rational form");
    int exp = 0;
    const double frac = std::frexp(x, &exp);
    // frac * 2^53 is an integer for every double.
    const auto mantissa = static_cast<long long>(std::ldexp(frac, 53));
    exp -= 53;
    Rational r{BigCount(mantissa)};
    if (exp >= 0) {
        r *= Rational{BigCount(1) << exp};
    } else {
        r /= Rational{BigCount(1) << -exp};
    }
    return r;
}

Rational eta(std::uint32_t t, std::uint32_t m, const Rational& p)
{
    if (m > t) throw std::invalid_argument("eta requires m <= t");
    if (p < 0 || p > 1) throw std::invalid_argument("eta requires 0 <= p <= 1");
    // p = a/b: sum_k C(t,k) a^k (b-a)^(t-k) / b^t over integers.
    const BigCount a = boost::multiprecision::numerator(p);
    const BigCount b = boost::multiprecision::denominator(p);
    const BigCount q = b - a;
    BigCount binom = 1; // C(t, k)
    BigCount num = 0;
    for (std::uint32_t k = 0; k <= t; ++k) {
        if (k > 0) binom = binom * (t - k + 1) / k;
        if (k >= m) num += binom * boost::multiprecision::pow(a, k) * boost::multiprecision::pow(q, t - k);
    }
    return Rational(num, boost::multiprecision::pow(b, t));
}

std::uint32_t compute_iter_count_optimized(double delta)
{
    check_delta(delta);
    const Rational target = exact_rational(delta);
    const Rational p(2, 5);
    for (std::uint32_t t = 1;; ++t) {
        if (eta(t, (t + 1) / 2, p) <= target) return t;
    }
}

std::uint32_t compute_iter_count(double delta, IterCountMode mode)
{
    return mode == IterCountMode::formula ? compute_iter_count_formula(delta) : compute_iter_count_optimized(delta);
}

std::optional<BigCount> find_median(std::vector<BigCount> values)
{
    if (values.empty()) return std::nullopt;
    const std::size_t mid = (values.size() - 1) / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    return values[mid];
}

std::uint32_t base_level(std::uint32_t pivot)
{
    if (pivot < 2) throw std::invalid_argument("pivot must be at least 2");
    return static_cast<std::uint32_t>(std::bit_width(pivot) - 1) - 1;
}

CoreResult approx_mc_core(const CnfFormula& f, const CoreConfig& cfg, RandomSource& rng,
                          std::optional<std::uint32_t> start_width)
{
    const std::uint32_t n = f.num_vars();
    const std::size_t bound = static_cast<std::size_t>(cfg.pivot) + 1;
    const std::uint32_t l = base_level(cfg.pivot);
    CoreResult r;

    const EnumerationResult first = cfg.bounded(BoundedQuery{f, {}, bound, cfg.per_call_budget});
    r.sat_calls += first.sat_calls;
    r.iterations.push_back({0, 0, first.models.size(), first.sat_calls, first.timed_out()});
    if (first.timed_out()) return r;
    if (first.models.size() <= cfg.pivot) {
        r.outcome = CoreResult::Outcome::count;
        r.exact_path = true;
        r.cell_size = first.models.size();
        r.value = r.cell_size;
        return r;
    }

    // More than pivot models means 2^n > pivot, so l < n. Width 0 would just
    // repeat the query above; the search begins at width 1.
    const std::uint32_t max_width = n - l;
    const std::uint32_t width0 = std::clamp<std::uint32_t>(start_width.value_or(1), 1, max_width);
    r.start_width = width0;
    std::uint32_t i = l + width0;
    std::size_t cell = 0;
    for (;;) {
        std::uint32_t retries = 0;
        for (;;) {
            const XorHash h = sample_hash(n, i - l, rng);
            const CellTarget alpha = sample_alpha(i - l, rng);
            const XorEncoding enc = encode_constraint(h, alpha, n + 1, cfg.chunk_width);
            const EnumerationResult s = cfg.bounded(BoundedQuery{f, enc.clauses, bound, cfg.per_call_budget});
            r.sat_calls += s.sat_calls;
            r.iterations.push_back({i, i - l, s.models.size(), s.sat_calls, s.timed_out()});
            if (!s.timed_out()) {
                cell = s.models.size();
                break;
            }
            ++r.timeout_retries;
            if (++retries > cfg.timeout_retry_cap) {
                r.final_i = i;
                r.cells_log2 = i - l;
                return r;
            }
        }
        if ((cell >= 1 && cell <= cfg.pivot) || i == n) break;
        ++i;
    }

    r.final_i = i;
    r.cells_log2 = i - l;
    r.cell_size = cell;
    if (cell == 0 || cell > cfg.pivot) return r;
    r.outcome = CoreResult::Outcome::count;
    r.value = BigCount(cell) << r.cells_log2;
    return r;
}

void Leapfrog::record(std::size_t index, const CoreResult& r)
{
    if (!in_warmup(index) || !r.is_count() || r.exact_path) return;
    if (!best_ || r.cells_log2 < *best_) best_ = r.cells_log2;
}

std::optional<std::uint32_t> Leapfrog::start_width(std::size_t index) const
{
    if (!enabled_ || index < warmup_) return std::nullopt;
    return best_;
}

RunReport approx_mc(const CnfFormula& f, const ApproxParams& params)
{
    params.validate();
    const auto started = std::chrono::steady_clock::now();

    RunReport report;
    report.params = params;
    report.num_vars = f.num_vars();
    report.num_clauses = f.num_clauses();
    report.pivot = compute_pivot(params.epsilon);
    report.t = compute_iter_count(params.delta, params.iter_count_mode);

    CoreConfig cfg{report.pivot, params.per_call_budget, params.timeout_retry_cap, params.chunk_width};
    if (!params.external_solver.empty()) {
        cfg.bounded = [cmd = params.external_solver](const BoundedQuery& q) { return bounded_sat_external(q, cmd); };
    }
    std::vector<CoreResult> results(report.t);
    Leapfrog leap(params.leapfrog, params.leapfrog_warmup);

    auto run_one = [&](std::size_t index) {
        CounterRng rng(derive_seed(params.seed, index));
        results[index] = approx_mc_core(f, cfg, rng, leap.start_width(index));
    };

    // Warm-up invocations feed the leapfrog record and run in order.
    std::size_t next = 0;
    while (next < results.size() && leap.in_warmup(next)) {
        run_one(next);
        leap.record(next, results[next]);
        ++next;
    }
    report.leapfrog_width = leap.recorded();

    const std::size_t remaining = results.size() - next;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, params.threads), remaining));
    if (workers <= 1) {
        for (; next < results.size(); ++next) run_one(next);
    } else {
        std::atomic<std::size_t> cursor{next};
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t idx = cursor++; idx < results.size(); idx = cursor++) run_one(idx);
                    } catch (...) {
                        errors[w] = std::current_exception();
                        cursor = results.size();
                    }
                });
            }
        }
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    std::vector<BigCount> counts;
    for (const CoreResult& r : results) {
        report.sat_calls += r.sat_calls;
        report.timeout_retries += r.timeout_retries;
        if (r.is_count()) counts.push_back(r.value);
    }
    report.non_bot = counts.size();
    report.final_count = find_median(std::move(counts));
    if (report.final_count) {
        const double c = report.final_count->convert_to<double>();
        report.interval = std::make_pair(c / (1.0 + params.epsilon), (1.0 + params.epsilon) * c);
    }
    report.core_traces = std::move(results);
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return report;
}

} // namespace amc
