// Command-line driver: energy landscapes, nearest-neighbor radius reports,
// invariant verification, capacity sweeps, partition diagnostics, scaling
// arithmetic and plateau selection. Every command is deterministic for a
// fixed seed and emits plot-ready CSV.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hopmem/checks.hpp"
#include "hopmem/config.hpp"
#include "hopmem/dynamics.hpp"
#include "hopmem/energy.hpp"
#include "hopmem/error.hpp"
#include "hopmem/grid_index.hpp"
#include "hopmem/matrix.hpp"
#include "hopmem/numerics.hpp"
#include "hopmem/partition.hpp"
#include "hopmem/patterns.hpp"
#include "hopmem/rng.hpp"
#include "hopmem/scaling.hpp"

namespace {

using hopmem::Exec;
using hopmem::KeyValueConfig;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

hopmem::Matrix load_matrix_auto(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) {
        throw hopmem::IngestError(0, "cannot open '" + path + "'");
    }
    char magic[4] = {};
    probe.read(magic, 4);
    probe.close();
    std::ifstream in(path, std::ios::binary);
    if (std::memcmp(magic, "AMV1", 4) == 0) {
        return hopmem::load_matrix_amv1(in);
    }
    return hopmem::load_matrix_csv(in);
}

hopmem::PatternSet load_patterns_auto(const std::string& path) {
    return hopmem::PatternSet::from_matrix(load_matrix_auto(path));
}

std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
        throw hopmem::IngestError(0, "cannot write '" + (dir / name).string() + "'");
    }
    return out;
}

// flag > config file > built-in default
template <typename T, typename Getter>
void fall_back(const CLI::App& cmd, const std::string& flag, const KeyValueConfig& cfg,
               const std::string& key, T& var, Getter getter) {
    if (cmd.count(flag) == 0) {
        if (auto v = (cfg.*getter)(key)) {
            var = static_cast<T>(*v);
        }
    }
}

struct Common {
    std::string config_path;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    bool serial = false;
    KeyValueConfig cfg;

    Exec exec() const { return serial ? Exec::Serial : Exec::Parallel; }

    void resolve(const CLI::App& cmd) {
        if (!config_path.empty()) {
            cfg = KeyValueConfig::parse_file(config_path);
        }
        fall_back(cmd, "--seed", cfg, "seed", seed, &KeyValueConfig::get_uint);
        fall_back(cmd, "--out", cfg, "out", out_dir, &KeyValueConfig::get_string);
        fall_back(cmd, "--serial", cfg, "serial", serial, &KeyValueConfig::get_bool);
    }
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--config", common.config_path, "flat key = value config file");
    cmd->add_option("--seed", common.seed, "root seed for all randomness");
    cmd->add_option("--out", common.out_dir, "output directory for CSV files");
    cmd->add_flag("--serial", common.serial, "run the serial reference kernels");
}

// ---------------------------------------------------------------------------
// landscape

int cmd_landscape(const CLI::App& cmd, Common& common, std::string patterns_path,
                  std::vector<std::string> variants, double beta, std::uint64_t resolution,
                  std::vector<double> box, double pad) {
    common.resolve(cmd);
    const KeyValueConfig& cfg = common.cfg;
    fall_back(cmd, "--patterns", cfg, "patterns", patterns_path, &KeyValueConfig::get_string);
    fall_back(cmd, "--variants", cfg, "variants", variants, &KeyValueConfig::get_string_list);
    fall_back(cmd, "--beta", cfg, "beta", beta, &KeyValueConfig::get_double);
    fall_back(cmd, "--resolution", cfg, "resolution", resolution, &KeyValueConfig::get_uint);
    fall_back(cmd, "--box", cfg, "box", box, &KeyValueConfig::get_double_list);
    fall_back(cmd, "--pad", cfg, "pad", pad, &KeyValueConfig::get_double);

    if (patterns_path.empty()) {
        throw std::invalid_argument("landscape: --patterns is required");
    }
    const hopmem::PatternSet set = load_patterns_auto(patterns_path);
    const std::size_t dim = set.dim();

    std::vector<double> lo(dim), hi(dim);
    if (!box.empty()) {
        if (box.size() != 2 * dim) {
            throw std::invalid_argument("landscape: box needs lo,hi per axis");
        }
        for (std::size_t k = 0; k < dim; ++k) {
            lo[k] = box[2 * k];
            hi[k] = box[2 * k + 1];
        }
    } else {
        for (std::size_t k = 0; k < dim; ++k) {
            double a = set.row(0)[k];
            double b = a;
            for (std::size_t i = 1; i < set.count(); ++i) {
                a = std::min(a, set.row(i)[k]);
                b = std::max(b, set.row(i)[k]);
            }
            lo[k] = a - pad;
            hi[k] = b + pad;
        }
    }

    for (const std::string& name : variants) {
        hopmem::LandscapeVariant variant;
        if (name == "lse") {
            variant = hopmem::LandscapeVariant::LseOnly;
        } else if (name == "reg") {
            variant = hopmem::LandscapeVariant::Regularizers;
        } else if (name == "mchn") {
            variant = hopmem::LandscapeVariant::Mchn;
        } else if (name == "distance") {
            variant = hopmem::LandscapeVariant::Distance;
        } else {
            throw std::invalid_argument("landscape: unknown variant '" + name +
                                        "' (expected lse, reg, mchn, distance)");
        }
        const hopmem::LandscapeTable table = hopmem::landscape_grid(
            set, variant, beta, lo, hi, static_cast<std::size_t>(resolution), common.exec());
        std::ostringstream fname;
        fname << "landscape_" << name << "_beta" << beta << ".csv";
        auto out = open_out(common.out_dir, fname.str());
        hopmem::write_landscape_csv(out, table);
        std::cout << "landscape: wrote " << fname.str() << " (" << table.points() << " points)\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// radius

int cmd_radius(const CLI::App& cmd, Common& common, std::string activations_path,
               std::vector<double> fractions, double bin_width) {
    common.resolve(cmd);
    const KeyValueConfig& cfg = common.cfg;
    fall_back(cmd, "--activations", cfg, "activations", activations_path,
              &KeyValueConfig::get_string);
    fall_back(cmd, "--fractions", cfg, "fractions", fractions, &KeyValueConfig::get_double_list);
    fall_back(cmd, "--bin-width", cfg, "bin_width", bin_width, &KeyValueConfig::get_double);

    if (activations_path.empty()) {
        throw std::invalid_argument("radius: --activations is required");
    }
    const hopmem::Matrix all = load_matrix_auto(activations_path);
    if (all.rows() < 2) {
        throw std::invalid_argument("radius: need at least two activation vectors");
    }
    const double reference = 2.0 * hopmem::critical_radius(static_cast<int>(all.dim()));

    auto stats_out = open_out(common.out_dir, "radius_stats.csv");
    stats_out << "fraction,count,mean,median,reference\n";

    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
        const double f = fractions[fi];
        if (!(f > 0.0) || f > 1.0) {
            throw std::invalid_argument("radius: fractions must be in (0, 1]");
        }
        const std::size_t rows = all.rows();
        const std::size_t take = std::max<std::size_t>(
            2, static_cast<std::size_t>(std::floor(f * static_cast<double>(rows))));

        // Deterministic subsample: partial Fisher-Yates on the index range.
        std::vector<std::size_t> idx(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            idx[i] = i;
        }
        hopmem::Rng rng(common.seed, fi);
        std::vector<double> data;
        data.reserve(take * all.dim());
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t j = i + rng.next_below(rows - i);
            std::swap(idx[i], idx[j]);
            const auto row = all.row(idx[i]);
            data.insert(data.end(), row.begin(), row.end());
        }
        const hopmem::Matrix sample(all.dim(), std::move(data));
        const hopmem::NnStats stats = hopmem::nn_distance_stats(sample, bin_width, common.exec());

        stats_out << fmt(f) << ',' << take << ',' << fmt(stats.mean) << ',' << fmt(stats.median)
                  << ',' << fmt(reference) << '\n';

        std::ostringstream fname;
        fname << "radius_hist_f" << fmt(f) << ".csv";
        auto hist_out = open_out(common.out_dir, fname.str());
        hist_out << "bin_start,bin_end,count\n";
        const double w = stats.histogram.bin_width;
        for (std::size_t b = 0; b < stats.histogram.counts.size(); ++b) {
            hist_out << fmt(static_cast<double>(b) * w) << ','
                     << fmt(static_cast<double>(b + 1) * w) << ',' << stats.histogram.counts[b]
                     << '\n';
        }
        std::cout << "radius: fraction " << f << " count " << take << " mean " << stats.mean
                  << " median " << stats.median << " reference " << reference << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const CLI::App& cmd, Common& common, hopmem::CheckConfig check) {
    common.resolve(cmd);
    const KeyValueConfig& cfg = common.cfg;
    fall_back(cmd, "--instances", cfg, "instances", check.instances, &KeyValueConfig::get_uint);
    fall_back(cmd, "--eglob-instances", cfg, "eglob_instances", check.eglob_instances,
              &KeyValueConfig::get_uint);
    fall_back(cmd, "--lemma-vectors", cfg, "lemma_vectors", check.lemma_vectors,
              &KeyValueConfig::get_uint);
    fall_back(cmd, "--max-dim", cfg, "max_dim", check.max_dim, &KeyValueConfig::get_uint);
    fall_back(cmd, "--max-count", cfg, "max_count", check.max_count, &KeyValueConfig::get_uint);
    fall_back(cmd, "--corrupt-mchn", cfg, "corrupt_mchn", check.corrupt_mchn,
              &KeyValueConfig::get_bool);
    check.seed = common.seed;
    check.exec = common.exec();

    const std::vector<hopmem::SuiteResult> results = hopmem::run_all_checks(check);
    auto out = open_out(common.out_dir, "verify.csv");
    out << "suite,instances,worst_slack,pass\n";
    bool all_pass = true;
    for (const hopmem::SuiteResult& r : results) {
        out << r.name << ',' << r.instances << ',' << fmt(r.worst_slack) << ','
            << (r.pass ? 1 : 0) << '\n';
        std::printf("%-48s  instances %6zu  worst slack %12.3e  %s  (%.2fs)\n", r.name.c_str(),
                    r.instances, r.worst_slack, r.pass ? "PASS" : "FAIL", r.seconds);
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "verify: all suites passed\n" : "verify: FAILURES detected\n");
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// capacity

int cmd_capacity(const CLI::App& cmd, Common& common, std::string variant_name, std::uint64_t n,
                 std::vector<double> counts_in, std::uint64_t trials, double corruption,
                 std::int64_t order, double beta) {
    common.resolve(cmd);
    const KeyValueConfig& cfg = common.cfg;
    fall_back(cmd, "--variant", cfg, "variant", variant_name, &KeyValueConfig::get_string);
    fall_back(cmd, "--n", cfg, "n", n, &KeyValueConfig::get_uint);
    fall_back(cmd, "--counts", cfg, "counts", counts_in, &KeyValueConfig::get_double_list);
    fall_back(cmd, "--trials", cfg, "trials", trials, &KeyValueConfig::get_uint);
    fall_back(cmd, "--corruption", cfg, "corruption", corruption, &KeyValueConfig::get_double);
    fall_back(cmd, "--order", cfg, "order", order, &KeyValueConfig::get_int);
    fall_back(cmd, "--beta", cfg, "beta", beta, &KeyValueConfig::get_double);

    hopmem::EnergySpec spec;
    if (variant_name == "classical") {
        spec.variant = hopmem::EnergySpec::Variant::ClassicalBinary;
    } else if (variant_name == "dense") {
        spec.variant = hopmem::EnergySpec::Variant::DensePolynomial;
    } else if (variant_name == "exponential") {
        spec.variant = hopmem::EnergySpec::Variant::ExponentialBinary;
    } else if (variant_name == "mchn") {
        spec.variant = hopmem::EnergySpec::Variant::Mchn;
    } else if (variant_name == "distance") {
        spec.variant = hopmem::EnergySpec::Variant::Distance;
    } else {
        throw std::invalid_argument("capacity: unknown variant '" + variant_name + "'");
    }
    spec.poly_order = static_cast<int>(order);
    spec.beta = beta;

    std::vector<std::size_t> counts;
    for (double c : counts_in) {
        counts.push_back(static_cast<std::size_t>(c));
    }
    const hopmem::CapacityCurve curve = hopmem::capacity_sweep(
        spec, n, counts, trials, corruption, common.seed, common.exec());

    auto out = open_out(common.out_dir, "capacity.csv");
    out << "d,success_rate\n";
    for (std::size_t i = 0; i < curve.counts.size(); ++i) {
        out << curve.counts[i] << ',' << fmt(curve.success_rates[i]) << '\n';
    }
    std::cout << "capacity: variant " << variant_name << " n " << n << " threshold d* "
              << curve.threshold_dstar << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// partition

int cmd_partition(const CLI::App& cmd, Common& common, std::uint64_t n,
                  std::vector<double> radii, std::uint64_t mc_samples) {
    common.resolve(cmd);
    const KeyValueConfig& cfg = common.cfg;
    fall_back(cmd, "--n", cfg, "n", n, &KeyValueConfig::get_uint);
    fall_back(cmd, "--radii", cfg, "radii", radii, &KeyValueConfig::get_double_list);
    fall_back(cmd, "--mc-samples", cfg, "mc_samples", mc_samples, &KeyValueConfig::get_uint);

    const int dim = static_cast<int>(n);
    if (radii.empty()) {
        radii.push_back(hopmem::critical_radius(dim));
    }

    auto out = open_out(common.out_dir, "partition.csv");
    out << "n,r,analytic,mc_mean,mc_se,lower,upper,paper_lower_variant\n";
    double z = 0.0;
    double z_lower = 0.0;
    double z_upper = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        const double analytic = hopmem::gaussian_ball_integral(dim, r);
        const hopmem::IntegralBounds bounds = hopmem::ball_integral_bounds(dim, r);
        const double loose = hopmem::ball_integral_lower_loose(dim, r);
        std::string mc_mean = "";
        std::string mc_se = "";
        if (mc_samples > 0) {
            const hopmem::McEstimate mc =
                hopmem::mc_ball_integral(dim, r, std::max<std::uint64_t>(mc_samples, 1000),
                                         common.seed + i, common.exec());
            mc_mean = fmt(mc.mean);
            mc_se = fmt(mc.standard_error);
        }
        out << n << ',' << fmt(r) << ',' << fmt(analytic) << ',' << mc_mean << ',' << mc_se << ','
            << fmt(bounds.lower) << ',' << fmt(bounds.upper) << ',' << fmt(loose) << '\n';
        z += analytic;
        z_lower += bounds.lower;
        z_upper += bounds.upper;
    }
    std::cout << "partition: Z = " << z << " in [" << z_lower << ", " << z_upper << "]"
              << ", loss floor log Z + 1/Z = " << hopmem::loss_from_partition(z) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// scaling

int cmd_scaling(const CLI::App& cmd, Common& common, std::vector<std::string> pairs,
                std::vector<double> chinchilla) {
    common.resolve(cmd);
    const KeyValueConfig& cfg = common.cfg;
    fall_back(cmd, "--pairs", cfg, "pairs", pairs, &KeyValueConfig::get_string_list);
    fall_back(cmd, "--chinchilla", cfg, "chinchilla", chinchilla,
              &KeyValueConfig::get_double_list);

    if (pairs.empty()) {
        throw std::invalid_argument("scaling: --pairs N:D[,N:D...] is required");
    }
    std::optional<hopmem::ChinchillaFit> fit;
    if (!chinchilla.empty()) {
        if (chinchilla.size() != 5) {
            throw std::invalid_argument("scaling: chinchilla constants are E,A,B,alpha,beta");
        }
        fit = hopmem::ChinchillaFit{chinchilla[0], chinchilla[1], chinchilla[2], chinchilla[3],
                                    chinchilla[4]};
    }

    auto out = open_out(common.out_dir, "scaling.csv");
    out << (fit ? "n,d,ratio,chinchilla_loss\n" : "n,d,ratio\n");
    for (const std::string& pair : pairs) {
        const std::size_t colon = pair.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("scaling: pair '" + pair + "' is not N:D");
        }
        const double nv = std::stod(pair.substr(0, colon));
        const double dv = std::stod(pair.substr(colon + 1));
        const double ratio = hopmem::balance_ratio(nv, dv);
        out << fmt(nv) << ',' << fmt(dv) << ',' << fmt(ratio);
        std::cout << "scaling: N " << nv << " D " << dv << " N/D^2 " << ratio;
        if (fit) {
            const double loss = hopmem::chinchilla_loss(nv, dv, *fit);
            out << ',' << fmt(loss);
            std::cout << " chinchilla loss " << loss;
        }
        out << '\n';
        std::cout << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// dstar

int cmd_dstar(const CLI::App& cmd, Common& common, std::vector<std::string> curve_paths,
              double model_size, std::vector<double> data_sizes, double sigma_sq,
              std::uint64_t window) {
    common.resolve(cmd);
    const KeyValueConfig& cfg = common.cfg;
    fall_back(cmd, "--curves", cfg, "curves", curve_paths, &KeyValueConfig::get_string_list);
    fall_back(cmd, "--model-size", cfg, "model_size", model_size, &KeyValueConfig::get_double);
    fall_back(cmd, "--data-sizes", cfg, "data_sizes", data_sizes,
              &KeyValueConfig::get_double_list);
    fall_back(cmd, "--sigma2", cfg, "sigma2", sigma_sq, &KeyValueConfig::get_double);
    fall_back(cmd, "--window", cfg, "window", window, &KeyValueConfig::get_uint);

    if (curve_paths.empty()) {
        throw std::invalid_argument("dstar: --curves is required");
    }
    if (curve_paths.size() != data_sizes.size()) {
        throw std::invalid_argument("dstar: one data size per curve file");
    }
    std::vector<hopmem::LossCurve> curves;
    for (std::size_t i = 0; i < curve_paths.size(); ++i) {
        std::ifstream in(curve_paths[i]);
        if (!in) {
            throw hopmem::IngestError(0, "cannot open '" + curve_paths[i] + "'");
        }
        curves.push_back(hopmem::load_loss_curve_csv(in, model_size, data_sizes[i]));
    }
    const hopmem::DstarSelection sel =
        hopmem::select_dstar(curves, sigma_sq, static_cast<std::size_t>(window));

    auto out = open_out(common.out_dir, "dstar.csv");
    out << "N,D,mse,selected\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        out << fmt(model_size) << ',' << fmt(curves[i].data_size) << ','
            << fmt(sel.per_curve_mse[i]) << ',' << ((sel.found && sel.index == i) ? 1 : 0)
            << '\n';
    }
    if (sel.found) {
        std::cout << "dstar: D* = " << sel.d_star << " (ratio N/D*^2 = "
                  << hopmem::balance_ratio(model_size, sel.d_star) << ")\n";
    } else {
        std::cout << "dstar: no curve met the threshold\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"associative-memory energy, retrieval and scaling toolkit"};
    app.require_subcommand(1);

    Common common;

    // landscape
    auto* landscape = app.add_subcommand("landscape", "emit energy landscape grids");
    add_common(landscape, common);
    std::string patterns_path;
    std::vector<std::string> variants = {"lse", "reg", "mchn", "distance"};
    double beta = 1.0;
    std::uint64_t resolution = 200;
    std::vector<double> box;
    double pad = 1.5;
    landscape->add_option("--patterns", patterns_path, "pattern file (csv or amv1)");
    landscape->add_option("--variants", variants, "lse,reg,mchn,distance")->delimiter(',');
    landscape->add_option("--beta", beta, "inverse temperature");
    landscape->add_option("--resolution", resolution, "points per axis");
    landscape->add_option("--box", box, "lo,hi per axis")->delimiter(',');
    landscape->add_option("--pad", pad, "auto-box padding around the patterns");

    // radius
    auto* radius = app.add_subcommand("radius", "nearest-neighbor distance report");
    add_common(radius, common);
    std::string activations_path;
    std::vector<double> fractions = {0.25, 0.5, 0.75, 1.0};
    double bin_width = 0.0;
    radius->add_option("--activations", activations_path, "activation file (csv or amv1)");
    radius->add_option("--fractions", fractions, "subsample fractions")->delimiter(',');
    radius->add_option("--bin-width", bin_width, "histogram bin width (0 = auto)");

    // verify
    auto* verify = app.add_subcommand("verify", "run all invariant suites");
    add_common(verify, common);
    hopmem::CheckConfig check;
    verify->add_option("--instances", check.instances, "random instances per suite");
    verify->add_option("--eglob-instances", check.eglob_instances, "instances per layer count");
    verify->add_option("--lemma-vectors", check.lemma_vectors, "random vectors per lemma");
    verify->add_option("--max-dim", check.max_dim, "max pattern dimension");
    verify->add_option("--max-count", check.max_count, "max pattern count");
    verify->add_flag("--corrupt-mchn", check.corrupt_mchn,
                     "fault injection: drop the quadratic regularizer");

    // capacity
    auto* capacity = app.add_subcommand("capacity", "storage capacity sweep");
    add_common(capacity, common);
    std::string variant_name = "classical";
    std::uint64_t cap_n = 50;
    std::vector<double> counts;
    std::uint64_t trials = 25;
    double corruption = 0.05;
    std::int64_t order = 3;
    double cap_beta = 1.0;
    capacity->add_option("--variant", variant_name,
                         "classical, dense, exponential, mchn, distance");
    capacity->add_option("--n", cap_n, "state dimension");
    capacity->add_option("--counts", counts, "pattern counts to try")->delimiter(',');
    capacity->add_option("--trials", trials, "trials per count");
    capacity->add_option("--corruption", corruption, "fraction of corrupted entries");
    capacity->add_option("--order", order, "polynomial order for the dense variant");
    capacity->add_option("--beta", cap_beta, "inverse temperature (continuous variants)");

    // partition
    auto* partition = app.add_subcommand("partition", "ball partition function diagnostics");
    add_common(partition, common);
    std::uint64_t part_n = 2;
    std::vector<double> radii;
    std::uint64_t mc_samples = 100000;
    partition->add_option("--n", part_n, "dimension");
    partition->add_option("--radii", radii, "ball radii (default: critical radius)")
        ->delimiter(',');
    partition->add_option("--mc-samples", mc_samples, "Monte Carlo samples (0 = skip)");

    // scaling
    auto* scaling = app.add_subcommand("scaling", "model/data balance arithmetic");
    add_common(scaling, common);
    std::vector<std::string> pairs;
    std::vector<double> chinchilla;
    scaling->add_option("--pairs", pairs, "N:D pairs")->delimiter(',');
    scaling->add_option("--chinchilla", chinchilla, "fit constants E,A,B,alpha,beta")
        ->delimiter(',');

    // dstar
    auto* dstar = app.add_subcommand("dstar", "plateau-based data size selection");
    add_common(dstar, common);
    std::vector<std::string> curve_paths;
    double model_size = 0.0;
    std::vector<double> data_sizes;
    double sigma_sq = 0.04;
    std::uint64_t window = 1000;
    dstar->add_option("--curves", curve_paths, "loss curve CSV files, sorted by D")
        ->delimiter(',');
    dstar->add_option("--model-size", model_size, "parameter count N shared by the curves");
    dstar->add_option("--data-sizes", data_sizes, "data size D per curve")->delimiter(',');
    dstar->add_option("--sigma2", sigma_sq, "plateau MSE threshold");
    dstar->add_option("--window", window, "iterations after the validation minimum");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (landscape->parsed()) {
            return cmd_landscape(*landscape, common, patterns_path, variants, beta, resolution,
                                 box, pad);
        }
        if (radius->parsed()) {
            return cmd_radius(*radius, common, activations_path, fractions, bin_width);
        }
        if (verify->parsed()) {
            return cmd_verify(*verify, common, check);
        }
        if (capacity->parsed()) {
            return cmd_capacity(*capacity, common, variant_name, cap_n, counts, trials,
                                corruption, order, cap_beta);
        }
        if (partition->parsed()) {
            return cmd_partition(*partition, common, part_n, radii, mc_samples);
        }
        if (scaling->parsed()) {
            return cmd_scaling(*scaling, common, pairs, chinchilla);
        }
        if (dstar->parsed()) {
            return cmd_dstar(*dstar, common, curve_paths, model_size, data_sizes, sigma_sq,
                             window);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
