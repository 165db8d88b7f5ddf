#include "cli.hpp"

#include "graphseg/data_io.hpp"
#include "graphseg/error.hpp"
#include "graphseg/eval.hpp"
#include "graphseg/manifest.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

namespace graphseg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Effective value lookup: command-line flag, then config file, then preset.
class Settings {
public:
    Settings(const CLI::App& app, std::string command) : app_(app), command_(std::move(command)) {}

    void load_config(const fs::path& path) {
        config_ = read_json(path);
        if (!config_.is_object()) throw ValidationError("config file " + path.string() + " must hold a JSON object");
        std::set<std::string> known;
        for (const CLI::Option* opt : app_.get_options()) {
            for (const auto& name : opt->get_lnames()) known.insert(name);
        }
        for (const auto& [key, value] : config_.items()) {
            if (!known.count(key) || key == "config" || key == "help") {
                throw ValidationError("config file " + path.string() + ": unknown key '" + key + "' for " + command_);
            }
        }
    }

    void set_preset(json preset) { preset_ = std::move(preset); }

    bool given(const std::string& name) const {
        return app_.get_option("--" + name)->count() > 0 || config_.contains(name);
    }

    template <class T>
    std::optional<T> find(const std::string& name) const {
        const CLI::Option* opt = app_.get_option("--" + name);
        if (opt->count() > 0) return opt->as<T>();
        try {
            if (config_.contains(name)) return config_[name].get<T>();
            if (preset_.contains(name)) return preset_[name].get<T>();
        } catch (const json::exception& e) {
            throw ValidationError("config value '" + name + "': " + e.what());
        }
        return std::nullopt;
    }

    template <class T>
    T get(const std::string& name, T fallback) const {
        return find<T>(name).value_or(fallback);
    }

    template <class T>
    T require(const std::string& name) const {
        auto v = find<T>(name);
        if (!v) throw ValidationError(command_ + ": --" + name + " is required");
        return *v;
    }

    bool flag(const std::string& name) const { return get<bool>(name, false); }

    /// Every effective setting, for the manifest.
    json effective() const {
        json out = json::object();
        for (const CLI::Option* opt : app_.get_options()) {
            const std::string name = opt->get_lnames().empty() ? "" : opt->get_lnames().front();
            if (name.empty() || name == "help" || name == "config") continue;
            if (opt->count() > 0) {
                const auto& res = opt->results();
                out[name] = opt->get_expected_min() == 0 ? json(true) : json(res.back());
            } else if (config_.contains(name)) {
                out[name] = config_[name];
            } else if (preset_.contains(name)) {
                out[name] = preset_[name];
            }
        }
        return out;
    }

private:
    const CLI::App& app_;
    std::string command_;
    json config_ = json::object();
    json preset_ = json::object();
};

void add_weight_options(CLI::App& app) {
    app.add_option("--kernel", "Edge weights: local, gaussian or cosine")->check(CLI::IsMember({"local", "gaussian", "cosine"}));
    app.add_option("--neighbors", "Nearest neighbors N per vertex");
    app.add_option("--local-m", "Local scaling neighbor index M");
    app.add_option("--sigma", "Gaussian bandwidth");
    app.add_option("--metric", "euclidean or cosine")->check(CLI::IsMember({"euclidean", "cosine"}));
}

WeightSpec weight_spec(const Settings& s) {
    WeightSpec spec;
    spec.neighbors = s.get<int>("neighbors", 10);
    const auto kind = s.get<std::string>("kernel", "local");
    if (kind == "local") {
        spec.kind = LocalScalingKernel{s.get<int>("local-m", 17)};
    } else if (kind == "gaussian") {
        spec.kind = GaussianKernel{s.require<double>("sigma")};
    } else if (kind == "cosine") {
        spec.kind = CosineKernel{};
    } else {
        throw ValidationError("unknown kernel '" + kind + "'");
    }
    validate(spec);
    return spec;
}

Metric metric_of(const Settings& s) {
    std::string m = s.get<std::string>("metric", s.get<std::string>("kernel", "local") == "cosine" ? "cosine" : "euclidean");
    if (m == "euclidean") return Metric::euclidean;
    if (m == "cosine") return Metric::cosine_distance;
    throw ValidationError("unknown metric '" + m + "'");
}

int positive_count(const Settings& s, const std::string& name, int fallback) {
    const int v = s.get<int>(name, fallback);
    if (v < 1) throw ValidationError("--" + name + " must be at least 1, got " + std::to_string(v));
    return v;
}

void add_solver_options(CLI::App& app) {
    app.add_option("--solver", "gl or mbo")->check(CLI::IsMember({"gl", "mbo"}));
    app.add_option("--epsilon", "GL interface scale");
    app.add_option("--dt", "Time step");
    app.add_option("--mu", "Fidelity strength");
    app.add_option("--eta", "Stopping threshold");
    app.add_option("--convexity", "GL convexity constant C (default mu + 1/epsilon)");
    app.add_option("--n-s", "MBO diffusion sub-steps per threshold");
    app.add_option("--max-iters", "Iteration cap");
    app.add_option("--fidelity-per-class", "Labeled samples per class");
    app.add_option("--fidelity-fraction", "Labeled fraction of each class");
}

SolverKind solver_of(const Settings& s) { return s.get<std::string>("solver", "mbo") == "gl" ? SolverKind::gl : SolverKind::mbo; }

GLConfig gl_config(const Settings& s) {
    GLConfig cfg;
    cfg.epsilon = s.get<double>("epsilon", cfg.epsilon);
    cfg.dt = s.get<double>("dt", cfg.dt);
    cfg.mu = s.get<double>("mu", cfg.mu);
    cfg.eta = s.get<double>("eta", cfg.eta);
    cfg.convexity = s.find<double>("convexity");
    cfg.max_iters = s.get<int>("max-iters", cfg.max_iters);
    cfg.validate();
    return cfg;
}

MBOConfig mbo_config(const Settings& s) {
    MBOConfig cfg;
    cfg.dt = s.get<double>("dt", cfg.dt);
    cfg.mu = s.get<double>("mu", cfg.mu);
    cfg.eta = s.get<double>("eta", cfg.eta);
    cfg.n_s = s.get<int>("n-s", cfg.n_s);
    cfg.max_iters = s.get<int>("max-iters", cfg.max_iters);
    cfg.validate();
    return cfg;
}

FidelityQuota fidelity_quota(const Settings& s) {
    const bool per_class = s.given("fidelity-per-class");
    const bool fraction = s.given("fidelity-fraction");
    if (per_class && fraction) {
        throw ValidationError("--fidelity-per-class and --fidelity-fraction are mutually exclusive");
    }
    if (fraction) {
        const double f = s.require<double>("fidelity-fraction");
        if (!(f > 0.0 && f <= 1.0)) throw ValidationError("--fidelity-fraction must lie in (0, 1]");
        return ClassFraction{f};
    }
    return PerClassCount{positive_count(s, "fidelity-per-class", 25)};
}

json quota_json(const FidelityQuota& q) {
    if (const auto* c = std::get_if<PerClassCount>(&q)) return {{"per_class", c->count}};
    return {{"fraction", std::get<ClassFraction>(q).fraction}};
}

void require_file(const fs::path& path, const std::string& what) {
    if (!fs::is_regular_file(path)) throw ValidationError(what + " not found: " + path.string());
}

fs::path sidecar(const fs::path& out, const std::string& suffix) { return fs::path(out.string() + suffix); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path.string());
    f << text;
}

// graph: features -> edge list

int cmd_graph(const Settings& s, std::ostream& out) {
    const fs::path features_path = s.require<std::string>("features");
    const fs::path out_path = s.require<std::string>("out");
    require_file(features_path, "feature file");
    const WeightSpec spec = weight_spec(s);
    const Metric metric = metric_of(s);

    const auto t0 = Clock::now();
    const FeatureMatrix features = load_features_csv(features_path);
    const SparseWeightGraph graph = knn_graph(features, spec, metric);
    const double seconds = seconds_since(t0);
    write_graph(graph, out_path);

    json manifest = {{"command", "graph"},
                     {"settings", s.effective()},
                     {"weights", to_json(spec, metric)},
                     {"inputs", {{"features", {{"path", features_path.string()}, {"hash", hash_file(features_path)}}}}},
                     {"n_vertices", graph.n_vertices()},
                     {"n_edges", graph.edges().size()},
                     {"output", {{"path", out_path.string()}, {"hash", hash_file(out_path)}}}};
    write_json(manifest, sidecar(out_path, ".manifest.json"));
    write_json({{"graph_seconds", seconds}}, sidecar(out_path, ".timings.json"));
    out << "graph: " << graph.n_vertices() << " vertices, " << graph.edges().size() << " edges -> " << out_path.string()
        << '\n';
    return ok;
}

// eigs: graph (or features, for Nystrom) -> eigencache

int cmd_eigs(const Settings& s, std::ostream& out) {
    const fs::path out_path = s.require<std::string>("out");
    const int n_e = positive_count(s, "n-e", 20);
    const bool nystrom = s.flag("nystrom");
    const auto seed = s.get<std::uint64_t>("seed", 0);

    json manifest = {{"command", "eigs"}, {"settings", s.effective()}, {"n_e", n_e}};
    SpectralBasis basis;
    const auto t0 = Clock::now();
    if (nystrom) {
        const fs::path features_path = s.require<std::string>("features");
        require_file(features_path, "feature file");
        const int sample = positive_count(s, "sample", 0);
        const WeightSpec spec = weight_spec(s);
        const Metric metric = metric_of(s);
        manifest["inputs"] = {{"features", {{"path", features_path.string()}, {"hash", hash_file(features_path)}}}};
        manifest["weights"] = to_json(spec, metric);
        basis = nystrom_eigenpairs(load_features_csv(features_path), spec, sample, n_e, seed, metric);
    } else {
        const fs::path graph_path = s.require<std::string>("graph");
        require_file(graph_path, "graph file");
        manifest["inputs"] = {{"graph", {{"path", graph_path.string()}, {"hash", hash_file(graph_path)}}}};
        EigenSolverOptions opts;
        opts.tol = s.get<double>("tol", opts.tol);
        opts.seed = seed;
        if (auto mv = s.find<long>("max-matvecs")) opts.max_matvecs = *mv;
        const SparseWeightGraph graph = read_graph(graph_path);
        if (n_e > graph.n_vertices()) {
            throw ValidationError("--n-e " + std::to_string(n_e) + " exceeds the " + std::to_string(graph.n_vertices()) +
                                  " vertices of the graph");
        }
        try {
            basis = smallest_eigenpairs(NormalizedLaplacian(graph), n_e, opts);
        } catch (const ConvergenceError& e) {
            manifest["converged"] = false;
            manifest["residuals"] = e.residuals();
            write_json(manifest, sidecar(out_path, ".manifest.json"));
            throw;
        }
    }
    const double seconds = seconds_since(t0);
    write_basis(basis, out_path);
    manifest["converged"] = true;
    manifest["method"] = basis.method_tag();
    manifest["output"] = {{"path", out_path.string()}, {"hash", hash_file(out_path)}};
    write_json(manifest, sidecar(out_path, ".manifest.json"));
    write_json({{"eigen_seconds", seconds}}, sidecar(out_path, ".timings.json"));
    out << "eigs: " << basis.n_e() << " pairs (" << basis.method_tag() << ") -> " << out_path.string() << '\n';
    return ok;
}

// segment: eigencache + ground truth -> labels file + manifest

int cmd_segment(const Settings& s, std::ostream& out) {
    const fs::path eigs_path = s.require<std::string>("eigs");
    const fs::path labels_path = s.require<std::string>("labels");
    const fs::path out_path = s.require<std::string>("out");
    require_file(eigs_path, "eigencache");
    require_file(labels_path, "label file");
    const fs::path manifest_path = s.get<std::string>("manifest", sidecar(out_path, ".manifest.json").string());

    const SolverKind solver = solver_of(s);
    const FidelityQuota quota = fidelity_quota(s);
    const auto seed = s.get<std::uint64_t>("seed", 0);
    const std::optional<int> n_e = s.given("n-e") ? std::optional<int>(positive_count(s, "n-e", 1)) : std::nullopt;

    const SpectralBasis basis = read_basis(eigs_path);
    std::vector<int> truth = load_labels_csv(labels_path);
    if (static_cast<int>(truth.size()) != basis.n_vertices()) {
        throw ValidationError("label file has " + std::to_string(truth.size()) + " entries but the eigencache covers " +
                              std::to_string(basis.n_vertices()) + " vertices");
    }
    const LabeledDataset data = make_dataset(FeatureMatrix(basis.n_vertices(), 0), truth);
    const FidelitySet fidelity = sample_fidelity(data, quota, seed);

    json manifest = {{"command", "segment"},
                     {"settings", s.effective()},
                     {"solver", to_string(solver)},
                     {"seed", seed},
                     {"fidelity", quota_json(quota)},
                     {"n_fidelity", fidelity.indices.size()},
                     {"inputs",
                      {{"eigs", {{"path", eigs_path.string()}, {"hash", hash_file(eigs_path)}}},
                       {"labels", {{"path", labels_path.string()}, {"hash", hash_file(labels_path)}}}}}};
    std::vector<int> labels;
    bool converged = false;
    const auto t0 = Clock::now();
    if (solver == SolverKind::gl) {
        GLConfig cfg = gl_config(s);
        cfg.seed = seed;
        if (n_e) cfg.n_e = *n_e;
        GLResult res = gl_segment(basis, fidelity, cfg);
        manifest["config"] = to_json(cfg);
        manifest["iterations"] = res.iterations;
        manifest["initial_energy"] = res.initial_energy;
        manifest["final_energy"] = res.final_energy;
        converged = res.converged;
        labels = std::move(res.labels);
    } else {
        MBOConfig cfg = mbo_config(s);
        cfg.seed = seed;
        if (n_e) cfg.n_e = *n_e;
        MBOResult res = mbo_segment(basis, fidelity, cfg);
        manifest["config"] = to_json(cfg);
        manifest["iterations"] = res.iterations;
        converged = res.converged;
        labels = std::move(res.labels);
    }
    const double seconds = seconds_since(t0);
    const double acc = accuracy(labels, truth);
    write_labels(labels, out_path);
    manifest["converged"] = converged;
    manifest["accuracy"] = acc;
    manifest["output"] = {{"path", out_path.string()}, {"hash", hash_file(out_path)}};
    write_json(manifest, manifest_path);
    write_json({{"solver_seconds", seconds}}, sidecar(out_path, ".timings.json"));

    char buf[128];
    std::snprintf(buf, sizeof buf, "segment: %s, %d iterations, accuracy %.2f%%%s\n", to_string(solver),
                  manifest["iterations"].get<int>(), 100.0 * acc, converged ? "" : " (not converged)");
    out << buf;
    return converged ? ok : not_converged;
}

// bench: named dataset preset -> report files

json bench_preset(const std::string& dataset, SolverKind solver) {
    const bool gl = solver == SolverKind::gl;
    if (dataset == "moons") {
        return {{"kernel", "local"}, {"neighbors", 10}, {"local-m", 17}, {"n-e", gl ? 15 : 20},
                {"epsilon", 1.0},    {"dt", 0.1},       {"mu", 30.0},    {"eta", 1e-7},
                {"n-s", 3},          {"fidelity-per-class", 25}};
    }
    if (dataset == "mnist") {
        return {{"kernel", "local"}, {"neighbors", 8}, {"local-m", 8}, {"n-e", 300},
                {"epsilon", 1.0},    {"dt", 0.15},     {"mu", 50.0},   {"eta", 1e-7},
                {"n-s", 3},          {"fidelity-per-class", 250}};
    }
    return {{"kernel", "local"}, {"neighbors", 10}, {"local-m", 17}, {"n-e", 20},
            {"epsilon", 1.0},    {"dt", 0.1},       {"mu", 30.0},    {"eta", 1e-7},
            {"n-s", 3},          {"fidelity-per-class", 25}};
}

int cmd_bench(Settings& s, std::ostream& out) {
    const std::string dataset = s.require<std::string>("dataset");
    if (dataset != "moons" && dataset != "csv" && dataset != "mnist") {
        throw ValidationError("unknown dataset '" + dataset + "' (moons, csv or mnist)");
    }
    s.set_preset(bench_preset(dataset, solver_of(s)));
    const fs::path out_dir = s.require<std::string>("out-dir");

    BenchmarkConfig config;
    config.dataset_name = dataset;
    config.weights = weight_spec(s);
    config.metric = metric_of(s);
    config.n_e = positive_count(s, "n-e", 20);
    config.eigen.tol = s.get<double>("tol", config.eigen.tol);
    if (auto mv = s.find<long>("max-matvecs")) config.eigen.max_matvecs = *mv;
    if (s.given("nystrom-sample")) config.nystrom_sample = positive_count(s, "nystrom-sample", 1);
    config.solver = solver_of(s);
    if (config.solver == SolverKind::gl) {
        config.gl = gl_config(s);
    } else {
        config.mbo = mbo_config(s);
    }
    config.fidelity = fidelity_quota(s);
    config.n_seeds = positive_count(s, "seeds", 10);
    config.base_seed = s.get<std::uint64_t>("base-seed", 0);

    json inputs = json::object();
    LabeledDataset data;
    if (dataset == "moons") {
        MoonsSpec spec;
        spec.seed = s.get<std::uint64_t>("data-seed", 0);
        data = generate_three_moons(spec);
        inputs["moons"] = {{"seed", spec.seed}, {"points_per_class", spec.points_per_class}, {"noise", spec.noise},
                           {"dimension", spec.dimension}};
    } else if (dataset == "csv") {
        const fs::path f = s.require<std::string>("features");
        const fs::path l = s.require<std::string>("labels");
        require_file(f, "feature file");
        require_file(l, "label file");
        data = make_dataset(load_features_csv(f), load_labels_csv(l));
        inputs["features"] = {{"path", f.string()}, {"hash", hash_file(f)}};
        inputs["labels"] = {{"path", l.string()}, {"hash", hash_file(l)}};
    } else {
        const fs::path f = s.require<std::string>("images");
        const fs::path l = s.require<std::string>("labels");
        require_file(f, "IDX image file");
        require_file(l, "IDX label file");
        data = load_mnist_idx(f, l);
        inputs["images"] = {{"path", f.string()}, {"hash", hash_file(f)}};
        inputs["labels"] = {{"path", l.string()}, {"hash", hash_file(l)}};
    }
    if (s.given("subset-per-class")) {
        const int per_class = positive_count(s, "subset-per-class", 1);
        const auto subset_seed = s.get<std::uint64_t>("subset-seed", 0);
        data = stratified_subset(data, per_class, subset_seed);
        inputs["subset"] = {{"per_class", per_class}, {"seed", subset_seed}};
    }
    if (config.n_e > static_cast<int>(data.labels.size())) {
        throw ValidationError("--n-e " + std::to_string(config.n_e) + " exceeds the " +
                              std::to_string(data.labels.size()) + " samples");
    }

    BenchmarkReport report;
    if (s.given("cache-dir") && !config.nystrom_sample) {
        const SpectrumCache cache(s.require<std::string>("cache-dir"));
        auto t0 = Clock::now();
        const SparseWeightGraph graph = knn_graph(data.features, config.weights, config.metric);
        const double graph_seconds = seconds_since(t0);
        t0 = Clock::now();
        const SpectralBasis basis = cache.get_or_compute(graph, config.n_e, config.eigen);
        const double eigen_seconds = seconds_since(t0);
        report = run_seeds(data, basis, config);
        report.graph_seconds = graph_seconds;
        report.eigen_seconds = eigen_seconds;
    } else {
        report = run_benchmark(data, config);
    }

    fs::create_directories(out_dir);
    json doc = report_json(report, config);
    doc["command"] = "bench";
    doc["settings"] = s.effective();
    doc["inputs"] = inputs;
    write_json(doc, out_dir / "report.json");
    write_json(timings_json(report), out_dir / "timings.json");
    const std::string table = report_table(report);
    write_text(out_dir / "report.txt", table);
    out << table;

    bool all_converged = true;
    for (const auto& run : report.runs) all_converged = all_converged && run.converged;
    return all_converged ? ok : not_converged;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graph-based multiclass segmentation: diffuse-interface GL and MBO solvers", "graphseg"};
    app.require_subcommand(1);

    CLI::App* graph = app.add_subcommand("graph", "Build a kNN weight graph from a feature CSV");
    graph->add_option("--features", "Feature CSV, one sample per row");
    graph->add_option("--out", "Graph file to write");
    add_weight_options(*graph);

    CLI::App* eigs = app.add_subcommand("eigs", "Smallest eigenpairs of the normalized Laplacian");
    eigs->add_option("--graph", "Graph file from `graphseg graph`");
    eigs->add_option("--n-e", "Number of eigenpairs");
    eigs->add_option("--tol", "Residual tolerance");
    eigs->add_option("--max-matvecs", "Operator application budget");
    eigs->add_option("--seed", "Start vector / landmark seed");
    eigs->add_flag("--nystrom", "Nystrom extension from features instead of the exact solver");
    eigs->add_option("--sample", "Nystrom landmark count");
    eigs->add_option("--features", "Feature CSV (Nystrom)");
    eigs->add_option("--out", "Eigencache file to write");
    add_weight_options(*eigs);

    CLI::App* segment = app.add_subcommand("segment", "Segment with GL or MBO from an eigencache");
    segment->add_option("--eigs", "Eigencache from `graphseg eigs`");
    segment->add_option("--labels", "Ground-truth labels, one per line; fidelity is drawn from them");
    segment->add_option("--n-e", "Leading eigenpairs to use (default: all)");
    segment->add_option("--seed", "Fidelity sampling and initialization seed");
    segment->add_option("--out", "Label file to write");
    segment->add_option("--manifest", "Manifest path (default: <out>.manifest.json)");
    add_solver_options(*segment);

    CLI::App* bench = app.add_subcommand("bench", "Multi-seed benchmark on a named dataset");
    bench->add_option("--dataset", "moons, csv or mnist");
    bench->add_option("--features", "Feature CSV (csv dataset)");
    bench->add_option("--images", "IDX image file (mnist dataset)");
    bench->add_option("--labels", "Label CSV or IDX label file");
    bench->add_option("--data-seed", "Three moons sampling seed");
    bench->add_option("--subset-per-class", "Stratified subset size per class");
    bench->add_option("--subset-seed", "Stratified subset seed");
    bench->add_option("--n-e", "Eigenpairs computed and used");
    bench->add_option("--tol", "Eigensolver residual tolerance");
    bench->add_option("--max-matvecs", "Eigensolver budget");
    bench->add_option("--nystrom-sample", "Use the Nystrom extension with this many landmarks");
    bench->add_option("--cache-dir", "Eigencache directory");
    bench->add_option("--seeds", "Number of seeded runs");
    bench->add_option("--base-seed", "Seed of the first run");
    bench->add_option("--out-dir", "Directory for report.json, timings.json and report.txt");
    add_weight_options(*bench);
    add_solver_options(*bench);

    for (CLI::App* sub : {graph, eigs, segment, bench}) sub->add_option("--config", "JSON file of option values");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "graphseg: " << e.what() << '\n';
        return validation_failed;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        Settings settings(*sub, sub->get_name());
        if (sub->get_option("--config")->count() > 0) {
            const fs::path cfg = sub->get_option("--config")->as<std::string>();
            require_file(cfg, "config file");
            settings.load_config(cfg);
        }
        if (sub == graph) return cmd_graph(settings, out);
        if (sub == eigs) return cmd_eigs(settings, out);
        if (sub == segment) return cmd_segment(settings, out);
        return cmd_bench(settings, out);
    } catch (const ValidationError& e) {
        err << "graphseg " << sub->get_name() << ": " << e.what() << '\n';
        return validation_failed;
    } catch (const ConvergenceError& e) {
        err << "graphseg " << sub->get_name() << ": " << e.what() << '\n';
        return not_converged;
    } catch (const NumericalError& e) {
        err << "graphseg " << sub->get_name() << ": " << e.what() << '\n';
        return not_converged;
    } catch (const std::exception& e) {
        err << "graphseg " << sub->get_name() << ": " << e.what() << '\n';
        return 1;
    }
}

}  // namespace graphseg::cli
