#include "bfree/criterion.hpp"
#include "bfree/primes.hpp"
#include "bfree/window.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

namespace bfree {

u64 pow_boundary_first_above(u64 x, double q) {
    if (x < 1) throw std::invalid_argument("pow_boundary_first_above: need x >= 1");
    if (!(q > 0.0) || q > 1.0) throw std::invalid_argument("pow_boundary_first_above: need 0 < q <= 1");
    long double lx = std::log(static_cast<long double>(x));
    long double target = static_cast<long double>(q) * lx;
    auto strictly_above = [&](u64 a) {
        if (a == 0) return false;
        long double la = std::log(static_cast<long double>(a));
        long double tol = 1e-15L * std::max<long double>(1.0L, std::abs(target));
        return la > target + tol;
    };
    long double guess = std::exp(target);
    u64 c = guess >= static_cast<long double>(x) ? x : static_cast<u64>(guess);
    u64 a = c > 2 ? c - 2 : 1;
    while (!strictly_above(a)) ++a;
    return a;
}

BesicovitchStat besicovitch_statistic(const FamilySpec& spec, u64 x, double eps) {
    if (x < 2) throw std::invalid_argument("besicovitch_statistic: need x >= 2");
    if (!(eps > 0.0) || eps >= 1.0)
        throw std::invalid_argument("besicovitch_statistic: need 0 < eps < 1");
    FiniteSet b = spec.materialize(x);
    BesicovitchStat out;
    out.x = x;
    out.epsilon = eps;
    if (b.empty()) return out;
    const u64 a_min = pow_boundary_first_above(x, 1.0 - eps);
    // Members of M_{B ∩ [1,a)} over [1, x], grown as a walks B upward.
    Window covered(1, x + 1);
    for (u64 a : b) {
        if (a >= a_min) {
            for (u64 m = a; m <= x; m += a)
                if (!covered.get(m)) ++out.raw_count;
        }
        for (u64 m = a; m <= x; m += a) covered.set(m);
    }
    out.value = static_cast<double>(out.raw_count) / static_cast<double>(x);
    return out;
}

CriterionReport criterion_scan(const FamilySpec& spec, const std::vector<u64>& x_grid,
                               const std::vector<double>& eps_grid, double threshold) {
    if (x_grid.empty() || eps_grid.empty())
        throw std::invalid_argument("criterion_scan: grids must be nonempty");
    for (std::size_t i = 1; i < x_grid.size(); ++i)
        if (x_grid[i] <= x_grid[i - 1])
            throw std::invalid_argument("criterion_scan: x grid must be ascending");
    for (std::size_t i = 1; i < eps_grid.size(); ++i)
        if (eps_grid[i] <= eps_grid[i - 1])
            throw std::invalid_argument("criterion_scan: eps grid must be ascending");
    CriterionReport r;
    r.x_grid = x_grid;
    r.eps_grid = eps_grid;
    r.statistic.assign(x_grid.size(), std::vector<double>(eps_grid.size(), 0.0));
    r.limsup_proxy.assign(eps_grid.size(), 0.0);
    for (std::size_t xi = 0; xi < x_grid.size(); ++xi) {
        for (std::size_t ei = 0; ei < eps_grid.size(); ++ei) {
            double s = besicovitch_statistic(spec, x_grid[xi], eps_grid[ei]).value;
            r.statistic[xi][ei] = s;
            r.limsup_proxy[ei] = std::max(r.limsup_proxy[ei], s);
        }
    }
    r.verdict.threshold = threshold;
    r.verdict.consistent = r.limsup_proxy.front() < threshold; // smallest eps
    return r;
}

double g_sum(u64 scale, const PatternSpec& pattern, u64 x, double eps) {
    if (scale < 1) throw std::invalid_argument("g_sum: need scale >= 1");
    if (x < 2) throw std::invalid_argument("g_sum: need x >= 2");
    if (!(eps > 0.0) || eps >= 1.0) throw std::invalid_argument("g_sum: need 0 < eps < 1");
    if (x < scale) return 0.0;
    const u64 lower_first = pow_boundary_first_above(x, 1.0 - eps); // first integer > x^(1-eps)
    KahanSum acc;
    for (u64 p : progression_pattern(pattern.level, pattern.cutoff, pattern.stride, x / scale)) {
        u64 v = checked_mul(scale, p);
        if (v >= lower_first && v <= x) acc.add(1.0 / static_cast<double>(p));
    }
    return acc.value();
}

double mertens_progression_sum(u64 k, u64 l, u64 x) {
    if (k < 1) throw std::invalid_argument("mertens_progression_sum: need k >= 1");
    if (x < 3) throw std::invalid_argument("mertens_progression_sum: need x >= 3");
    u64 lr = l % k;
    if (gcd_u64(k, lr == 0 ? k : lr) != 1)
        throw std::invalid_argument("mertens_progression_sum: k and l must be coprime");
    KahanSum acc;
    for_each_prime(2, x + 1, [&](u64 p) {
        if (p % k == lr) acc.add(1.0 / static_cast<double>(p));
    });
    return acc.value();
}

std::string criterion_report_csv(const CriterionReport& r) {
    std::ostringstream os;
    os.precision(15);
    os << "x,eps,S\n";
    for (std::size_t xi = 0; xi < r.x_grid.size(); ++xi)
        for (std::size_t ei = 0; ei < r.eps_grid.size(); ++ei)
            os << r.x_grid[xi] << ',' << r.eps_grid[ei] << ',' << r.statistic[xi][ei] << '\n';
    return os.str();
}

std::string criterion_report_summary_json(const CriterionReport& r) {
    nlohmann::json j;
    j["eps_grid"] = r.eps_grid;
    j["limsup_proxy"] = r.limsup_proxy;
    j["verdict"] = {{"consistent_with_existence", r.verdict.consistent},
                    {"threshold", r.verdict.threshold},
                    {"label", r.verdict.label}};
    return j.dump(2);
}

} // namespace bfree
