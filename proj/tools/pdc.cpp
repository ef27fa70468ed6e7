// pdc: exact uniform sampling of integer partitions and relatives via
// probabilistic divide-and-conquer, plus the measurement harness.

#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdc/batch.hpp"
#include "pdc/counting.hpp"
#include "pdc/ensemble.hpp"
#include "pdc/samplers.hpp"
#include "pdc/variants.hpp"
#include "pdc/verify.hpp"

using json = nlohmann::ordered_json;
using namespace pdc;

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (std::uint64_t(rd()) << 32) ^ rd();
}

std::string format_parts(const Partition& p) {
    std::string out;
    for (std::size_t i = 0; i < p.parts.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(p.parts[i]);
    }
    return out;
}

std::string format_mults(const MultiplicityVector& v) {
    std::string out;
    for (std::size_t i = 0; i < v.counts.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(v.counts[i].first) + ':' + std::to_string(v.counts[i].second);
    }
    return out;
}

std::string format_plane_mults(const PlaneGrid& g) {
    std::string out;
    for (std::size_t c = 0; c < g.cells.size(); ++c) {
        const auto& [i, j, z] = g.cells[c];
        if (c) out += ' ';
        out += std::to_string(i) + ',' + std::to_string(j) + ':' + std::to_string(z);
    }
    return out;
}

json plane_to_json(const PlaneGrid& g) {
    json cells = json::array();
    for (const auto& [i, j, z] : g.cells) cells.push_back({i, j, z});
    return cells;
}

struct SampleConfig {
    std::uint64_t n = 0;
    std::string method = "auto";
    std::string variant;
    std::uint64_t k = 0;
    std::uint64_t b = 0; // 0 = default floor(sqrt(n))
    std::uint64_t count = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::uint64_t jobs = 1;
    std::uint64_t base_cutoff = 489;
    std::string format = "parts";
    bool stats = false;
    std::string out_path;
};

// one worker-produced record: the formatted sample plus its stats
struct Emitted {
    std::string text;
    SampleStats stats;
};

void resolve_method(SampleConfig& cfg) {
    if (!cfg.variant.empty()) return;
    if (cfg.method == "auto") cfg.method = cfg.n <= 2000 ? "table" : "recursive";
    if (cfg.method == "small-large" && cfg.b == 0)
        cfg.b = std::max<std::uint64_t>(1, std::uint64_t(std::sqrt(double(cfg.n))));
}

// Produces sample index i on its own substream; pure, so workers can run
// any subset of indices concurrently with identical results.
Emitted produce_sample(const SampleConfig& cfg, std::uint64_t index) {
    RngStream rng = RngStream(cfg.seed).substream(index);
    Emitted rec;
    Partition part;
    MultiplicityVector mults;
    const PlaneGrid* grid = nullptr;
    PlaneGrid grid_store;

    if (cfg.variant == "kcore") {
        auto [bp, st] = sample_kcore(cfg.n, cfg.k, rng);
        part = std::move(bp.partition);
        mults = part.to_multiplicities();
        rec.stats = st;
    } else if (cfg.variant == "setshape") {
        auto [shape, st] = sample_setpartition_shape(cfg.n, rng);
        mults = std::move(shape.block_sizes);
        part = Partition::from_multiplicities(mults);
        rec.stats = st;
    } else if (cfg.variant == "planearray") {
        auto [arr, st] = sample_plane_array(cfg.n, rng);
        grid_store = std::move(arr.grid);
        grid = &grid_store;
        rec.stats = st;
    } else if (cfg.method == "table") {
        part = sample_table(cfg.n, *shared_count_table(std::max<std::uint64_t>(cfg.n, 1)), rng);
        mults = part.to_multiplicities();
        rec.stats.rng.uniform_draws = rng.draws();
    } else if (cfg.method == "lucky") {
        auto [p, st] = sample_lucky(cfg.n, rng);
        part = std::move(p);
        mults = part.to_multiplicities();
        rec.stats = st;
    } else if (cfg.method == "small-large") {
        auto [p, st] = sample_pdc_small_large(cfg.n, cfg.b, rng);
        part = std::move(p);
        mults = part.to_multiplicities();
        rec.stats = st;
    } else if (cfg.method == "trivial") {
        auto [p, st] = sample_pdc_trivial(cfg.n, rng);
        part = std::move(p);
        mults = part.to_multiplicities();
        rec.stats = st;
    } else if (cfg.method == "recursive") {
        auto [p, st] = sample_pdc_recursive(cfg.n, rng, cfg.base_cutoff);
        part = std::move(p);
        mults = part.to_multiplicities();
        rec.stats = st;
    } else {
        throw CLI::ValidationError("--method", "unknown method " + cfg.method);
    }

    if (cfg.format == "parts") {
        if (grid) throw CLI::ValidationError("--format", "planearray has no parts form; use mults or json");
        rec.text = format_parts(part);
    } else if (cfg.format == "mults") {
        rec.text = grid ? format_plane_mults(*grid) : format_mults(mults);
    } else { // json array element
        json e = grid ? plane_to_json(*grid) : json(part.parts);
        rec.text = e.dump();
    }
    return rec;
}

json config_json(const SampleConfig& cfg) {
    json c{{"n", cfg.n},
           {"count", cfg.count},
           {"format", cfg.format},
           {"jobs", cfg.jobs}};
    if (!cfg.variant.empty()) {
        c["variant"] = cfg.variant;
        if (cfg.variant == "kcore") c["k"] = cfg.k;
    } else {
        c["method"] = cfg.method;
        if (cfg.method == "small-large") c["b"] = cfg.b;
        if (cfg.method == "recursive") c["base_cutoff"] = cfg.base_cutoff;
    }
    return c;
}

int run_sample(SampleConfig cfg) {
    resolve_method(cfg);
    if (cfg.variant == "kcore" && cfg.k < 2)
        throw CLI::ValidationError("--k", "kcore needs --k >= 2");

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!cfg.out_path.empty() && cfg.out_path != "-") {
        file.open(cfg.out_path);
        if (!file) throw CLI::ValidationError("--out", "cannot open " + cfg.out_path);
        os = &file;
    }

    std::cerr << "# seed: " << cfg.seed << "\n";
    if (cfg.format == "json") {
        json meta{{"version", kVersion}, {"seed", cfg.seed}, {"config", config_json(cfg)}};
        *os << "{\"meta\":" << meta.dump() << ",\"samples\":[";
    }

    SampleStats agg;
    std::uint64_t emitted = 0;
    auto emit = [&](const Emitted& rec) {
        if (cfg.format == "json")
            *os << (emitted ? "," : "") << rec.text;
        else
            *os << rec.text << "\n";
        agg.merge(rec.stats);
        ++emitted;
    };

    if (cfg.jobs <= 1) {
        for (std::uint64_t i = 0; i < cfg.count; ++i) emit(produce_sample(cfg, i));
    } else {
        // workers fill a reorder buffer; the main thread drains it in index
        // order so output is deterministic regardless of scheduling
        std::mutex mu;
        std::condition_variable cv;
        std::map<std::uint64_t, Emitted> ready;
        std::atomic<std::uint64_t> next_index{0};
        std::exception_ptr error;
        std::vector<std::thread> pool;
        for (std::uint64_t w = 0; w < cfg.jobs; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    std::uint64_t i = next_index.fetch_add(1);
                    if (i >= cfg.count) return;
                    try {
                        Emitted rec = produce_sample(cfg, i);
                        std::lock_guard<std::mutex> lock(mu);
                        ready.emplace(i, std::move(rec));
                        cv.notify_one();
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(mu);
                        if (!error) error = std::current_exception();
                        cv.notify_one();
                        return;
                    }
                }
            });
        {
            std::unique_lock<std::mutex> lock(mu);
            for (std::uint64_t want = 0; want < cfg.count; ++want) {
                cv.wait(lock, [&] { return error || ready.count(want); });
                if (error) break;
                emit(ready.at(want));
                ready.erase(want);
            }
        }
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    if (cfg.format == "json") *os << "]}\n";
    if (cfg.stats) {
        json s{{"samples", emitted},
               {"proposals", agg.proposals},
               {"accepted", agg.accepted},
               {"uniform_draws", agg.rng.uniform_draws},
               {"acceptance_coins", agg.rng.acceptance_coins},
               {"coin_escalations", agg.coin_escalations}};
        std::cerr << s.dump() << "\n";
    }
    return 0;
}

// chi-square verification against the exact law of the chosen method
int run_verify(std::uint64_t n, const std::string& method, std::uint64_t samples,
               std::uint64_t seed, std::uint64_t k, std::uint64_t b) {
    RngStream rng(seed);
    std::vector<std::uint64_t> counts;
    std::vector<double> weights; // empty = uniform null
    std::string cells_desc;

    if (method == "kcore") {
        if (k < 2) throw CLI::ValidationError("--k", "kcore needs --k >= 2");
        auto idx = enumerate_partitions(n);
        std::map<std::vector<std::uint64_t>, std::size_t> pos;
        for (const auto& p : idx.list())
            if (p.parts.empty() || p.parts.front() < k) pos.emplace(p.parts, pos.size());
        counts.assign(pos.size(), 0);
        for (std::uint64_t s = 0; s < samples; ++s)
            counts[pos.at(sample_kcore(n, k, rng).first.partition.parts)]++;
        cells_desc = "bounded partitions";
    } else if (method == "setshape") {
        auto idx = enumerate_partitions(n);
        counts.assign(idx.size(), 0);
        weights.resize(idx.size());
        for (std::size_t c = 0; c < idx.size(); ++c) {
            auto mv = idx.at(c).to_multiplicities();
            double lw = std::lgamma(double(n) + 1.0);
            for (const auto& [i, z] : mv.counts)
                lw -= double(z) * std::lgamma(double(i) + 1.0) + std::lgamma(double(z) + 1.0);
            weights[c] = std::exp(lw);
        }
        for (std::uint64_t s = 0; s < samples; ++s) {
            auto shape = sample_setpartition_shape(n, rng).first;
            counts[idx.index_of(Partition::from_multiplicities(shape.block_sizes))]++;
        }
        cells_desc = "set-partition shapes";
    } else if (method == "planearray") {
        if (n > 14) throw CLI::ValidationError("--n", "planearray verification enumerates arrays; use n <= 14");
        using Key = std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>>;
        std::map<Key, std::size_t> pos;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
        for (std::uint64_t i = 0; i < n; ++i)
            for (std::uint64_t j = 0; i + j + 1 <= n; ++j) cells.emplace_back(i, j);
        Key cur;
        std::function<void(std::size_t, std::uint64_t)> gen = [&](std::size_t ci, std::uint64_t rem) {
            if (rem == 0) {
                Key key = cur;
                std::sort(key.begin(), key.end());
                pos.emplace(key, pos.size());
                return;
            }
            if (ci >= cells.size()) return;
            auto [i, j] = cells[ci];
            std::uint64_t d = i + j + 1;
            gen(ci + 1, rem);
            for (std::uint64_t z = 1; z * d <= rem; ++z) {
                cur.emplace_back(i, j, z);
                gen(ci + 1, rem - z * d);
                cur.pop_back();
            }
        };
        gen(0, n);
        counts.assign(pos.size(), 0);
        for (std::uint64_t s = 0; s < samples; ++s) {
            Key key = sample_plane_array(n, rng).first.grid.cells;
            std::sort(key.begin(), key.end());
            counts[pos.at(key)]++;
        }
        cells_desc = "weight-n arrays";
    } else {
        auto idx = enumerate_partitions(n);
        counts.assign(idx.size(), 0);
        auto table = (method == "table") ? shared_count_table(std::max<std::uint64_t>(n, 1)) : nullptr;
        std::uint64_t split = b ? b : std::max<std::uint64_t>(1, std::uint64_t(std::sqrt(double(n))));
        if (method == "batch") {
            std::uint64_t done = 0;
            while (done < samples) {
                std::uint64_t m = std::min<std::uint64_t>(1000, samples - done);
                auto res = batch_mix_match(n, split, m, rng);
                for (const auto& s : res.samples) counts[idx.index_of(*s)]++;
                done += m;
            }
        } else {
            for (std::uint64_t s = 0; s < samples; ++s) {
                Partition p;
                if (method == "table")
                    p = sample_table(n, *table, rng);
                else if (method == "lucky")
                    p = sample_lucky(n, rng).first;
                else if (method == "small-large")
                    p = sample_pdc_small_large(n, split, rng).first;
                else if (method == "trivial")
                    p = sample_pdc_trivial(n, rng).first;
                else if (method == "recursive")
                    p = sample_pdc_recursive(n, rng, std::min<std::uint64_t>(489, n / 2 + 1)).first;
                else
                    throw CLI::ValidationError("--method", "unknown method " + method);
                counts[idx.index_of(p)]++;
            }
        }
        cells_desc = "partitions";
    }

    ChiSquareResult result;
    if (weights.empty()) {
        result = chi_square_uniform(counts);
    } else {
        double total_w = 0, total_c = 0;
        for (double w : weights) total_w += w;
        for (std::uint64_t c : counts) total_c += double(c);
        double stat = 0;
        for (std::size_t c = 0; c < counts.size(); ++c) {
            double e = total_c * weights[c] / total_w;
            double d = double(counts[c]) - e;
            stat += d * d / e;
        }
        result.statistic = stat;
        result.dof = counts.size() - 1;
        result.p_value = gamma_q(double(result.dof) / 2.0, stat / 2.0);
    }

    bool pass = result.p_value > 0.001;
    std::cout << "method=" << method << " n=" << n << " samples=" << samples << " cells="
              << counts.size() << " (" << cells_desc << ") chi2=" << result.statistic
              << " dof=" << result.dof << " p=" << result.p_value << " seed=" << seed << " -> "
              << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

json cost_report_json(const CostReport& r, std::uint64_t seed) {
    json j{{"version", kVersion},
           {"seed", seed},
           {"method", r.method},
           {"n", r.n},
           {"trials", r.trials},
           {"mean_proposals", r.mean_proposals},
           {"mean_rng_draws", r.mean_rng_draws},
           {"mean_recursion_depth", r.mean_recursion_depth}};
    if (r.k) j["k"] = *r.k;
    if (r.b) j["b"] = *r.b;
    if (r.theory_value) j["theory_value"] = *r.theory_value;
    if (r.ratio) j["ratio"] = *r.ratio;
    json levels = json::array();
    for (const auto& lv : r.per_level)
        levels.push_back({{"mean_target", lv.mean_target},
                          {"mean_proposals", lv.mean_proposals},
                          {"mean_draws", lv.mean_draws},
                          {"runs", lv.runs}});
    j["per_level"] = levels;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact uniform sampling of integer partitions via probabilistic divide-and-conquer"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // ---- count ----
    std::uint64_t count_n = 0;
    bool flag_exact = false, flag_hr1 = false;
    auto* count_cmd = app.add_subcommand("count", "print p_n (exact) or ln p_n (hr1 approximation)");
    count_cmd->add_option("n", count_n, "weight")->required();
    auto* opt_exact = count_cmd->add_flag("--exact", flag_exact, "exact big-integer count (default)");
    count_cmd->add_flag("--hr1", flag_hr1, "one-term Hardy-Ramanujan-Lehmer ln p_n")->excludes(opt_exact);

    // ---- sample ----
    SampleConfig scfg;
    auto* sample_cmd = app.add_subcommand("sample", "draw exactly uniform samples");
    sample_cmd->add_option("--n", scfg.n, "target weight")->required();
    sample_cmd->add_option("--method", scfg.method,
                           "table|lucky|small-large|trivial|recursive|auto (default auto)");
    sample_cmd->add_option("--variant", scfg.variant, "kcore|setshape|planearray")
        ->check(CLI::IsMember({"kcore", "setshape", "planearray"}));
    sample_cmd->add_option("--k", scfg.k, "part bound for --variant kcore");
    sample_cmd->add_option("--b", scfg.b, "split point for small-large (default floor(sqrt n))");
    sample_cmd->add_option("--count", scfg.count, "number of samples (default 1)");
    auto* sseed = sample_cmd->add_option("--seed", scfg.seed, "RNG seed (default: entropy)");
    sample_cmd->add_option("--jobs", scfg.jobs, "worker threads (default 1)");
    sample_cmd->add_option("--base-cutoff", scfg.base_cutoff, "recursive base case size (default 489)");
    sample_cmd->add_option("--format", scfg.format, "parts|mults|json (default parts)")
        ->check(CLI::IsMember({"parts", "mults", "json"}));
    sample_cmd->add_flag("--stats", scfg.stats, "print aggregate stats to stderr");
    sample_cmd->add_option("--out", scfg.out_path, "output path (default stdout)");

    // ---- batch ----
    std::uint64_t batch_n = 0, batch_b = 0, batch_m = 0, batch_vmax = 0, batch_seed = 0;
    bool batch_roaming = true;
    auto* batch_cmd = app.add_subcommand("batch", "mix-and-match batch sampling");
    batch_cmd->add_option("--n", batch_n, "target weight")->required();
    batch_cmd->add_option("--b", batch_b, "split point (default floor(sqrt n))");
    batch_cmd->add_option("--m", batch_m, "batch size")->required();
    batch_cmd->add_flag("--roaming,!--no-roaming", batch_roaming,
                        "greedy roaming tilt in phase B (default on)");
    batch_cmd->add_option("--vmax", batch_vmax, "demands that may stay unmet (default 0)");
    auto* bseed = batch_cmd->add_option("--seed", batch_seed, "RNG seed");

    // ---- estimate ----
    std::uint64_t est_n = 0, est_m1 = 0, est_m2 = 0, est_b = 0, est_seed = 0;
    std::string est_g = "one";
    auto* est_cmd = app.add_subcommand("estimate", "opportunistic mix-and-match estimator");
    est_cmd->add_option("--n", est_n, "target weight")->required();
    est_cmd->add_option("--m1", est_m1, "A-side proposals")->required();
    est_cmd->add_option("--m2", est_m2, "B-side proposals")->required();
    est_cmd->add_option("--b", est_b, "split point (default floor(sqrt n))");
    est_cmd->add_option("--g", est_g, "score: one|largest-even|dominance-pairs")
        ->check(CLI::IsMember({"one", "largest-even", "dominance-pairs"}));
    auto* eseed = est_cmd->add_option("--seed", est_seed, "RNG seed");

    // ---- verify ----
    std::uint64_t ver_n = 0, ver_samples = 0, ver_seed = 0, ver_k = 0, ver_b = 0;
    std::string ver_method;
    auto* ver_cmd = app.add_subcommand("verify", "chi-square check against the exact law");
    ver_cmd->add_option("--n", ver_n, "target weight")->required();
    ver_cmd->add_option("--method", ver_method,
                        "table|lucky|small-large|trivial|recursive|batch|kcore|setshape|planearray")
        ->required();
    ver_cmd->add_option("--samples", ver_samples, "sample count")->required();
    ver_cmd->add_option("--seed", ver_seed, "RNG seed")->required();
    ver_cmd->add_option("--k", ver_k, "part bound for kcore");
    ver_cmd->add_option("--b", ver_b, "split point override");

    // ---- bench ----
    std::uint64_t bench_n = 0, bench_trials = 0, bench_seed = 0, bench_k = 0, bench_b = 0,
                  bench_cutoff = 489;
    std::string bench_method, bench_out;
    auto* bench_cmd = app.add_subcommand("bench", "measure acceptance costs against theory");
    bench_cmd->add_option("--method", bench_method, "see measure_cost methods")->required();
    bench_cmd->add_option("--n", bench_n, "target weight")->required();
    bench_cmd->add_option("--trials", bench_trials, "trial count (>= 100)")->required();
    bench_cmd->add_option("--seed", bench_seed, "RNG seed")->required();
    bench_cmd->add_option("--k", bench_k, "part bound (kcore methods)");
    bench_cmd->add_option("--b", bench_b, "split point (small-large)");
    bench_cmd->add_option("--base-cutoff", bench_cutoff, "recursive base case size");
    bench_cmd->add_option("--out", bench_out, "report path; - for stdout (default)");

    try {
        app.parse(argc, argv);

        if (count_cmd->parsed()) {
            if (flag_hr1)
                std::printf("%.17g\n", hr1_log(count_n));
            else
                std::printf("%s\n", partition_count(count_n).get_str().c_str());
            return 0;
        }
        if (sample_cmd->parsed()) {
            if (!*sseed) scfg.seed = entropy_seed();
            return run_sample(scfg);
        }
        if (batch_cmd->parsed()) {
            if (!*bseed) batch_seed = entropy_seed();
            if (batch_b == 0)
                batch_b = std::max<std::uint64_t>(1, std::uint64_t(std::sqrt(double(batch_n))));
            RngStream rng(batch_seed);
            std::cerr << "# seed: " << batch_seed << "\n";
            auto res = batch_mix_match(batch_n, batch_b, batch_m, rng,
                                       {.roaming = batch_roaming, .v_max = batch_vmax});
            for (const auto& s : res.samples)
                std::cout << (s ? format_parts(*s) : "MISSING") << "\n";
            json stats{{"missing", res.missing_count},
                       {"phase_a_proposals", res.phase_a.proposals},
                       {"phase_b_proposals", res.phase_b.proposals},
                       {"phase_a_draws", res.phase_a.rng.uniform_draws},
                       {"phase_b_draws", res.phase_b.rng.uniform_draws}};
            std::cerr << stats.dump() << "\n";
            return 0;
        }
        if (est_cmd->parsed()) {
            if (!*eseed) est_seed = entropy_seed();
            if (est_b == 0)
                est_b = std::max<std::uint64_t>(1, std::uint64_t(std::sqrt(double(est_n))));
            std::function<double(const Partition&)> g;
            if (est_g == "one")
                g = [](const Partition&) { return 1.0; };
            else if (est_g == "largest-even")
                g = [](const Partition& p) {
                    return (!p.parts.empty() && p.parts.front() % 2 == 0) ? 1.0 : 0.0;
                };
            else // dominance-pairs: does the partition dominate its conjugate?
                g = [](const Partition& p) { return dominates(p, conjugate(p)) ? 1.0 : 0.0; };
            RngStream rng(est_seed);
            auto rep = opportunistic_estimate(est_n, est_b, est_m1, est_m2, g, rng);
            json j{{"version", kVersion},
                   {"seed", est_seed},
                   {"n", est_n},
                   {"b", est_b},
                   {"m1", est_m1},
                   {"m2", est_m2},
                   {"g", est_g},
                   {"W", rep.matches},
                   {"G", rep.total_score},
                   {"g_bar_pairs", rep.g_bar_pairs}};
            if (rep.matched_defined)
                j["g_bar_matched"] = rep.g_bar_matched;
            else
                j["g_bar_matched"] = nullptr;
            std::cout << j.dump() << "\n";
            return 0;
        }
        if (ver_cmd->parsed())
            return run_verify(ver_n, ver_method, ver_samples, ver_seed, ver_k, ver_b);
        if (bench_cmd->parsed()) {
            MeasureOptions mopts;
            if (bench_k) mopts.k = bench_k;
            if (bench_b) mopts.b = bench_b;
            mopts.base_cutoff = bench_cutoff;
            auto report = measure_cost(bench_method, bench_n, bench_trials, bench_seed, mopts);
            json j = cost_report_json(report, bench_seed);
            if (bench_out.empty() || bench_out == "-") {
                std::cout << j.dump(2) << "\n";
            } else {
                std::ofstream f(bench_out);
                if (!f) throw CLI::ValidationError("--out", "cannot open " + bench_out);
                f << j.dump(2) << "\n";
            }
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0; // --help / --version
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
