#include "pdc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pdc/counting.hpp"

namespace pdc {

namespace {

constexpr double kLog2 = 0.69314718055994530942;
constexpr double kCellRateFloor = 0x1.0p-80; // per-cell enumeration threshold
constexpr double kProposalTiny = 0x1.0p-75;  // per-index truncation of proposals

// x^i with periodic resync so incremental drift stays below ~4096 ulp
struct PowTracker {
    double x;
    double log_x;
    double xp = 1.0;
    std::uint64_t i = 0;

    void step() {
        ++i;
        xp *= x;
        if ((i & 0xfff) == 0) xp = std::exp(static_cast<double>(i) * log_x);
    }
};

} // namespace

double tilt_parameter(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("tilt_parameter: n must be >= 1");
    return std::exp(-kTiltC / std::sqrt(static_cast<double>(n)));
}

namespace detail {
double bounded_mean(double x, std::uint64_t k);
}

double grand_canonical_mean(double x) {
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("grand_canonical_mean: need 0 < x < 1");
    return detail::bounded_mean(x, ~std::uint64_t(0));
}

std::uint64_t MultiplicityVector::multiplicity(std::uint64_t i) const {
    auto it = std::lower_bound(counts.begin(), counts.end(), i,
                               [](const auto& p, std::uint64_t v) { return p.first < v; });
    return (it != counts.end() && it->first == i) ? it->second : 0;
}

void MultiplicityVector::normalize() {
    std::sort(counts.begin(), counts.end());
    std::size_t out = 0;
    for (std::size_t in = 0; in < counts.size(); ++in) {
        if (out > 0 && counts[out - 1].first == counts[in].first)
            counts[out - 1].second += counts[in].second;
        else
            counts[out++] = counts[in];
    }
    counts.resize(out);
}

std::uint64_t weighted_sum(const MultiplicityVector& v) {
    unsigned __int128 acc = 0;
    for (const auto& [i, z] : v.counts) acc += static_cast<unsigned __int128>(i) * z;
    if (acc > (static_cast<unsigned __int128>(1) << 63))
        throw std::logic_error("weighted_sum: accumulator exceeded 2^63");
    return static_cast<std::uint64_t>(acc);
}

std::uint64_t weighted_sum(const ParityVector& v) {
    unsigned __int128 acc = 0;
    for (std::uint64_t i : v.ones) acc += i;
    if (acc > (static_cast<unsigned __int128>(1) << 63))
        throw std::logic_error("weighted_sum: accumulator exceeded 2^63");
    return static_cast<std::uint64_t>(acc);
}

// ---------------------------------------------------------------------------
// naive engine
// ---------------------------------------------------------------------------

GeometricProposal::GeometricProposal(const GrandCanonical& gc, std::uint64_t i_lo, std::uint64_t i_hi)
    : gc_(gc), i_lo_(i_lo), i_hi_(i_hi), log_x_(std::log(gc.x)) {
    if (!(gc.x > 0.0 && gc.x < 1.0)) throw std::invalid_argument("GeometricProposal: need 0 < x < 1");
}

MultiplicityVector GeometricProposal::propose(RngStream& rng) const {
    MultiplicityVector v;
    v.support = gc_.n;
    for (std::uint64_t i = i_lo_; i <= i_hi_ && i >= i_lo_; ++i) {
        std::uint64_t z = sample_geometric_log(static_cast<double>(i) * log_x_, rng);
        v.add(i, z);
    }
    v.normalize();
    return v;
}

// ---------------------------------------------------------------------------
// compound-Poisson engine
// ---------------------------------------------------------------------------

PoissonProposal::PoissonProposal(const GrandCanonical& gc, std::uint64_t i_lo, std::uint64_t i_hi)
    : gc_(gc), i_lo_(i_lo), i_hi_(i_hi) {
    if (!(gc.x > 0.0 && gc.x < 1.0)) throw std::invalid_argument("PoissonProposal: need 0 < x < 1");
    const double log_x = std::log(gc.x);
    double collected = 0.0;
    double tail = 0.0;
    if (i_lo <= i_hi) {
        struct Raw {
            double rate;
            std::uint64_t i, j;
        };
        std::vector<Raw> raw;
        for (std::uint64_t j = 1;; ++j) {
            const double dj = static_cast<double>(j);
            double top = std::exp(static_cast<double>(i_lo) * dj * log_x) / dj;
            if (top < kCellRateFloor) {
                // rows beyond hold even less; account for them analytically
                for (std::uint64_t jj = j;; ++jj) {
                    const double djj = static_cast<double>(jj);
                    double xj = std::exp(djj * log_x);
                    double row = (std::exp(static_cast<double>(i_lo) * djj * log_x) -
                                  std::exp(static_cast<double>(i_hi + 1) * djj * log_x)) /
                                 (djj * (1.0 - xj));
                    tail += row;
                    if (row < 1e-40) break;
                }
                break;
            }
            std::uint64_t i = i_lo;
            for (; i <= i_hi; ++i) {
                double rate = std::exp(static_cast<double>(i) * dj * log_x) / dj;
                if (rate < kCellRateFloor) break;
                raw.push_back({rate, i, j});
            }
            // row remainder past the enumeration cut:
            //   sum_{i'=i..i_hi} x^(i'j)/j = (x^(ij) - x^((i_hi+1)j)) / (j (1-x^j))
            if (i <= i_hi) {
                double xj = std::exp(dj * log_x);
                tail += (std::exp(static_cast<double>(i) * dj * log_x) -
                         std::exp(static_cast<double>(i_hi + 1) * dj * log_x)) /
                        (dj * (1.0 - xj));
            }
        }
        std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) { return a.rate > b.rate; });
        cells_.reserve(raw.size());
        cum_.reserve(raw.size());
        for (const Raw& r : raw) {
            collected += r.rate;
            cells_.push_back({r.i, r.j});
            cum_.push_back(collected);
        }
    }
    if (tail > 0x1.0p-50 * std::max(1.0, collected))
        throw std::logic_error("PoissonProposal: truncated rate above tolerance");
    total_rate_ = collected + tail;
}

MultiplicityVector PoissonProposal::propose(RngStream& rng) const {
    MultiplicityVector v;
    v.support = gc_.n;
    if (total_rate_ <= 0.0) return v;
    std::uint64_t arrivals = sample_poisson(total_rate_, rng);
    for (std::uint64_t a = 0; a < arrivals; ++a) {
        double u = rng.next_double() * total_rate_;
        auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
        if (it == cum_.end()) continue; // zero-effect tail cell
        const Cell& c = cells_[static_cast<std::size_t>(it - cum_.begin())];
        v.add(c.i, c.j);
    }
    v.normalize();
    return v;
}

// ---------------------------------------------------------------------------
// Ross largest-index engine
// ---------------------------------------------------------------------------

LargestIndexProposal::LargestIndexProposal(const GrandCanonical& gc)
    : gc_(gc), log_x_(std::log(gc.x)) {
    if (!(gc.x > 0.0 && gc.x < 1.0)) throw std::invalid_argument("LargestIndexProposal: need 0 < x < 1");
    const std::uint64_t cut =
        std::min<std::uint64_t>(gc.n, static_cast<std::uint64_t>(75.0 * kLog2 / -log_x_) + 1);
    if (cut > (1ull << 27))
        throw std::length_error("LargestIndexProposal: index range too large for the CDF cache");
    // suffix[j] = sum_{k=j+1..n} ln(1 - x^k), built downward from the cut
    std::vector<double> suffix(cut + 1);
    double beyond = 0.0;
    if (cut < gc.n) {
        double xc = std::exp(static_cast<double>(cut + 1) * log_x_);
        double xn = std::exp(static_cast<double>(gc.n + 1) * log_x_);
        beyond = -(xc - xn) / (1.0 - gc.x);
    }
    suffix[cut] = beyond;
    for (std::uint64_t j = cut; j-- > 0;)
        suffix[j] = suffix[j + 1] + std::log1p(-std::exp(static_cast<double>(j + 1) * log_x_));
    cdf_.resize(cut + 1);
    double acc = std::exp(suffix[0]); // P(L = 0)
    cdf_[0] = acc;
    for (std::uint64_t j = 1; j <= cut; ++j) {
        acc += std::exp(static_cast<double>(j) * log_x_ + suffix[j]);
        cdf_[j] = acc;
    }
}

MultiplicityVector LargestIndexProposal::propose(RngStream& rng) const {
    MultiplicityVector v;
    v.support = gc_.n;
    double u = rng.next_double();
    std::uint64_t largest;
    if (u >= cdf_.back())
        largest = cdf_.size() - 1; // truncated tail, probability < 2^-70
    else
        largest = static_cast<std::uint64_t>(
            std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    if (largest == 0) return v;
    for (std::uint64_t i = 1; i < largest; ++i)
        v.add(i, sample_geometric_log(static_cast<double>(i) * log_x_, rng));
    v.add(largest, 1 + sample_geometric_log(static_cast<double>(largest) * log_x_, rng));
    v.normalize();
    return v;
}

double poisson_process_rate(double x, std::uint64_t i_lo, std::uint64_t i_hi) {
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("poisson_process_rate: need 0 < x < 1");
    const double log_x = std::log(x);
    double s = 0.0;
    for (std::uint64_t j = 1;; ++j) {
        const double dj = static_cast<double>(j);
        double xj = std::exp(dj * log_x);
        double hi_term = (i_hi == 0) ? 0.0 : std::exp(static_cast<double>(i_hi + 1) * dj * log_x);
        double term = (std::exp(static_cast<double>(i_lo) * dj * log_x) - hi_term) / (dj * (1.0 - xj));
        s += term;
        if (term < s * 1e-18 + 1e-300) break;
    }
    return s;
}

// ---------------------------------------------------------------------------
// one-shot wrappers
// ---------------------------------------------------------------------------

namespace {

template <typename F>
std::pair<MultiplicityVector, RngBudget> with_budget(RngStream& rng, F&& f) {
    std::uint64_t before = rng.draws();
    MultiplicityVector v = f();
    return {std::move(v), RngBudget{rng.draws() - before, 0}};
}

} // namespace

std::pair<MultiplicityVector, RngBudget> propose_naive(const GrandCanonical& gc, RngStream& rng) {
    GeometricProposal engine(gc, 1, gc.n);
    return with_budget(rng, [&] { return engine.propose(rng); });
}

std::pair<MultiplicityVector, RngBudget> propose_poisson(const GrandCanonical& gc, RngStream& rng) {
    PoissonProposal engine(gc, 1, gc.n);
    return with_budget(rng, [&] { return engine.propose(rng); });
}

std::pair<MultiplicityVector, RngBudget> propose_largest_index(const GrandCanonical& gc,
                                                               RngStream& rng) {
    LargestIndexProposal engine(gc);
    return with_budget(rng, [&] { return engine.propose(rng); });
}

std::pair<ParityVector, RngBudget> propose_parity(const GrandCanonical& gc, std::uint64_t i_from,
                                                  RngStream& rng) {
    if (i_from < 1 || i_from > gc.n) throw std::invalid_argument("propose_parity: need 1 <= i_from <= n");
    const double log_x = std::log(gc.x);
    const std::uint64_t i_end =
        std::min<std::uint64_t>(gc.n, static_cast<std::uint64_t>(75.0 * kLog2 / -log_x) + 1);
    ParityVector v;
    v.i_from = i_from;
    v.support = gc.n;
    std::uint64_t before = rng.draws();
    PowTracker pt{gc.x, log_x, 1.0, 0};
    while (pt.i + 1 < i_from) pt.step();
    for (std::uint64_t i = i_from; i <= i_end; ++i) {
        pt.step();
        if (rng.next_double() < pt.xp / (1.0 + pt.xp)) v.ones.push_back(i);
    }
    return {std::move(v), RngBudget{rng.draws() - before, 0}};
}

// ---------------------------------------------------------------------------
// restricted-variant tilts and proposals
// ---------------------------------------------------------------------------

namespace detail {

// sum_{1<=i<k} i x^i/(1-x^i), with early exit once terms stop mattering
double bounded_mean(double x, std::uint64_t k) {
    const double log_x = std::log(x);
    PowTracker pt{x, log_x, 1.0, 0};
    double sum = 0.0;
    for (std::uint64_t i = 1; i < k; ++i) {
        pt.step();
        double term = static_cast<double>(i) * pt.xp / (1.0 - pt.xp);
        sum += term;
        if (term < sum * 1e-17 + 1e-300 && i > 8) break;
    }
    return sum;
}

double bounded_mean_derivative(double x, std::uint64_t k) {
    const double log_x = std::log(x);
    PowTracker pt{x, log_x, 1.0, 0};
    double sum = 0.0;
    for (std::uint64_t i = 1; i < k; ++i) {
        pt.step();
        double denom = 1.0 - pt.xp;
        double term = static_cast<double>(i) * static_cast<double>(i) * (pt.xp / x) / (denom * denom);
        sum += term;
        if (term < sum * 1e-17 + 1e-300 && i > 8) break;
    }
    return sum;
}

} // namespace detail

double solve_bounded_tilt(std::uint64_t n, std::uint64_t k, double tol) {
    if (k < 2) throw std::invalid_argument("solve_bounded_tilt: k must be >= 2");
    if (n < 1) throw std::invalid_argument("solve_bounded_tilt: n must be >= 1");
    const double target = static_cast<double>(n);
    double lo = 1e-18, hi = 1.0 - 1e-14;
    if (detail::bounded_mean(hi, k) < target)
        throw std::runtime_error("solve_bounded_tilt: bracket failed (numeric limit)");
    for (int it = 0; it < 200 && (hi - lo) > tol * 0.5 * (hi + lo); ++it) {
        double mid = 0.5 * (lo + hi);
        (detail::bounded_mean(mid, k) < target ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) { // Newton polish
        double f = detail::bounded_mean(x, k) - target;
        double fp = detail::bounded_mean_derivative(x, k);
        double step = f / fp;
        double nx = x - step;
        if (!(nx > lo && nx < hi)) break;
        x = nx;
        if (std::fabs(step) < tol * x) break;
    }
    return x;
}

double set_partition_tilt(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("set_partition_tilt: n must be >= 1");
    const double log_n = std::log(static_cast<double>(n));
    double x = std::max(0.2, log_n); // solve ln x + x = ln n
    for (int it = 0; it < 100; ++it) {
        double step = (std::log(x) + x - log_n) / (1.0 / x + 1.0);
        x -= step;
        if (x <= 0.0) x = 1e-12;
        if (std::fabs(step) < 1e-15 * std::max(1.0, x)) break;
    }
    return x;
}

std::pair<MultiplicityVector, RngBudget> propose_set_partition(std::uint64_t n, double x,
                                                               RngStream& rng,
                                                               std::uint64_t skip_index) {
    if (!(x > 0.0)) throw std::invalid_argument("propose_set_partition: need x > 0");
    MultiplicityVector v;
    v.support = n;
    std::uint64_t before = rng.draws();
    const double log_x = std::log(x);
    for (std::uint64_t i = 1; i <= n; ++i) {
        double rate = std::exp(static_cast<double>(i) * log_x - std::lgamma(static_cast<double>(i) + 1.0));
        if (static_cast<double>(i) > x && rate < kProposalTiny) break;
        if (i == skip_index) continue;
        v.add(i, sample_poisson(rate, rng));
    }
    v.normalize();
    return {std::move(v), RngBudget{rng.draws() - before, 0}};
}

// ---------------------------------------------------------------------------
// plane-partition arrays
// ---------------------------------------------------------------------------

std::uint64_t plane_weight(const PlaneGrid& g) {
    unsigned __int128 acc = 0;
    for (const auto& [i, j, z] : g.cells)
        acc += static_cast<unsigned __int128>(i + j + 1) * z;
    if (acc > (static_cast<unsigned __int128>(1) << 63))
        throw std::logic_error("plane_weight: accumulator exceeded 2^63");
    return static_cast<std::uint64_t>(acc);
}

double plane_tilt(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("plane_tilt: n must be >= 1");
    const double zeta3 = 1.2020569031595942854;
    return std::exp(-std::cbrt(2.0 * zeta3 / static_cast<double>(n)));
}

std::uint64_t plane_box(std::uint64_t n) {
    const double x = plane_tilt(n);
    const double log_x = std::log(x);
    // P(nonzero beyond diagonal B) <= x^(B+1) ((B+1)(1-x) + x)/(1-x)^2
    std::uint64_t b = static_cast<std::uint64_t>(50.0 * kLog2 / -log_x) + 1;
    for (;; ++b) {
        double lt = static_cast<double>(b + 1) * log_x +
                    std::log((static_cast<double>(b + 1) * (1.0 - x) + x) / ((1.0 - x) * (1.0 - x)));
        if (lt < -50.0 * kLog2) return b;
    }
}

PlaneProposal::PlaneProposal(std::uint64_t n, bool exclude_origin)
    : n_(n), box_(plane_box(n)), x_(plane_tilt(n)) {
    const double log_x = std::log(x_);
    const std::uint64_t d_lo = exclude_origin ? 2 : 1;
    struct Raw {
        double rate;
        std::uint64_t d, m;
    };
    std::vector<Raw> raw;
    double tail = 0.0;
    for (std::uint64_t d = d_lo; d <= box_; ++d) {
        const double dd = static_cast<double>(d);
        const double xd = std::exp(dd * log_x);
        double rate = dd * xd; // m = 1
        std::uint64_t m = 1;
        for (; rate >= kCellRateFloor; ++m) {
            raw.push_back({rate, d, m});
            rate *= xd * static_cast<double>(m) / static_cast<double>(m + 1);
        }
        // remainder of this diagonal: sum_{m'>m} d x^(d m')/m' <= d x^(dm)/(m (1-x^d))
        tail += dd * std::exp(dd * static_cast<double>(m) * log_x) /
                (static_cast<double>(m) * (1.0 - xd));
    }
    double collected_est = 0.0;
    for (const Raw& r : raw) collected_est += r.rate;
    if (tail > 0x1.0p-50 * std::max(1.0, collected_est))
        throw std::logic_error("PlaneProposal: truncated rate above tolerance");
    std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) { return a.rate > b.rate; });
    double acc = 0.0;
    cells_.reserve(raw.size());
    cum_.reserve(raw.size());
    for (const Raw& r : raw) {
        acc += r.rate;
        cells_.emplace_back(r.d, r.m);
        cum_.push_back(acc);
    }
    total_rate_ = acc + tail;
}

PlaneGrid PlaneProposal::propose(RngStream& rng) const {
    PlaneGrid g;
    g.box = box_;
    g.x = x_;
    if (total_rate_ <= 0.0) return g;
    std::uint64_t arrivals = sample_poisson(total_rate_, rng);
    std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> hits;
    for (std::uint64_t a = 0; a < arrivals; ++a) {
        double u = rng.next_double() * total_rate_;
        auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
        if (it == cum_.end()) continue; // zero-effect tail
        auto [d, m] = cells_[static_cast<std::size_t>(it - cum_.begin())];
        std::uint64_t i = rng.next_below(d); // uniform cell on the diagonal
        hits.emplace_back(i, d - 1 - i, m);
    }
    std::sort(hits.begin(), hits.end());
    for (std::size_t t = 0; t < hits.size(); ++t) {
        auto [i, j, z] = hits[t];
        if (!g.cells.empty() && std::get<0>(g.cells.back()) == i && std::get<1>(g.cells.back()) == j)
            std::get<2>(g.cells.back()) += z;
        else
            g.cells.emplace_back(i, j, z);
    }
    return g;
}

std::pair<PlaneGrid, RngBudget> propose_plane_array(std::uint64_t n, RngStream& rng) {
    PlaneProposal engine(n, /*exclude_origin=*/false);
    std::uint64_t before = rng.draws();
    PlaneGrid g = engine.propose(rng);
    return {std::move(g), RngBudget{rng.draws() - before, 0}};
}

} // namespace pdc
