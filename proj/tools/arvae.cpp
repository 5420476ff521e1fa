// arvae: data generation, training, evaluation and latent-space inspection.
//
// Exit codes: 0 success, 2 usage error, 1 runtime failure.
// Relative output paths are resolved against $ARVAE_OUTPUT_DIR when it is set.

#include "arvae/attrreg/trainer.hpp"
#include "arvae/datagen/generators.hpp"
#include "arvae/experiments/pipeline.hpp"
#include "arvae/metrics/suite.hpp"
#include "arvae/numgrad/errors.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace arvae;

namespace {

constexpr const char* kVersion = "arvae 1.0";
constexpr const char* kOutputEnv = "ARVAE_OUTPUT_DIR";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v)
{
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

template <class T>
std::string join(const std::vector<T>& values)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ',';
        if constexpr (std::is_floating_point_v<T>) out << fmt(values[i]);
        else out << values[i];
    }
    return out.str();
}

fs::path output_path(const std::string& p)
{
    fs::path path(p);
    if (path.is_relative()) {
        if (const char* dir = std::getenv(kOutputEnv); dir != nullptr && *dir != '\0') return fs::path(dir) / path;
    }
    return path;
}

void ensure_parent(const fs::path& path)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

std::ofstream open_output(const fs::path& path)
{
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

/// Resolved settings of one run, echoed as `key = value` lines.
class Manifest {
public:
    explicit Manifest(std::string command) { set("command", std::move(command)); }

    void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
    void set(const std::string& key, double value) { set(key, fmt(value)); }
    void set(const std::string& key, std::size_t value) { set(key, std::to_string(value)); }
    void set(const std::string& key, bool value) { set(key, std::string(value ? "true" : "false")); }
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }
    void erase(const std::string& key) { entries_.erase(key); }

    std::string text() const
    {
        std::ostringstream out;
        out << "# " << kVersion << " run manifest\n";
        for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
        return out.str();
    }

    void write(const fs::path& path) const
    {
        auto out = open_output(path);
        out << text();
    }

private:
    std::map<std::string, std::string> entries_;
};

std::string manifest_name(const fs::path& output) { return output.string() + ".manifest.txt"; }

datagen::Dataset load_data(const std::string& path)
{
    if (path.empty()) throw UsageError("a dataset path is required (--data)");
    if (!fs::exists(path)) throw UsageError("dataset '" + path + "' does not exist");
    return datagen::load_dataset(path);
}

experiments::Checkpoint load_ckpt(const std::string& path)
{
    if (path.empty()) throw UsageError("a checkpoint path is required (--checkpoint)");
    if (!fs::exists(path)) throw UsageError("checkpoint '" + path + "' does not exist");
    return experiments::load_checkpoint(path);
}

std::string available(const std::vector<std::string>& names)
{
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
    return out;
}

void require_attributes(const datagen::Dataset& data, const std::vector<std::string>& names)
{
    for (const auto& n : names) {
        if (!data.has_attribute(n)) {
            throw UsageError("attribute '" + n + "' not in dataset; available: " + available(data.attribute_names()));
        }
    }
}

std::vector<std::string> default_regularized(const datagen::Dataset& data)
{
    std::vector<std::string> out;
    for (const auto& n : data.attribute_names()) {
        // disks make orientation unlearnable; it stays out of the default set
        if (data.domain() == datagen::Domain::Shapes && n == "orientation") continue;
        out.push_back(n);
    }
    return out;
}

void check_domain(const experiments::Checkpoint& ckpt, const datagen::Dataset& data)
{
    if (data.input_width() != ckpt.model_config.input_width || data.domain() != ckpt.domain.domain) {
        throw FormatError("checkpoint expects " + datagen::to_string(ckpt.domain.domain) + " inputs of width " +
                          std::to_string(ckpt.model_config.input_width) + ", dataset has " +
                          datagen::to_string(data.domain()) + " inputs of width " + std::to_string(data.input_width()));
    }
}

std::vector<std::string> spec_names(const attrreg::RegularizationSpec& spec)
{
    std::vector<std::string> out;
    for (const auto& e : spec.entries()) out.push_back(e.name);
    return out;
}

// ---------------------------------------------------------------- gen-data

struct GenOptions {
    std::string domain = "shapes";
    std::size_t n = 5000;
    std::size_t side = 16;
    std::uint64_t seed = 0;
    double onset_probability = 0.3;
    double rest_probability = 0.25;
    int max_step = 4;
    int max_drift = 0;
    std::string out = "data.ds";
};

void add_gen(CLI::App& app, GenOptions& o)
{
    app.add_option("--domain", o.domain, "shapes or measures")->check(CLI::IsMember({"shapes", "measures"}));
    app.add_option("--n", o.n, "number of examples");
    app.add_option("--side", o.side, "image side in pixels (shapes)");
    app.add_option("--seed", o.seed, "generator seed");
    app.add_option("--onset-prob", o.onset_probability, "per-tick onset probability (measures)");
    app.add_option("--rest-prob", o.rest_probability, "chance a non-onset tick rests (measures)");
    app.add_option("--max-step", o.max_step, "pitch walk step bound (measures)");
    app.add_option("--max-drift", o.max_drift, "per-measure pitch drift bound (measures)");
    app.add_option("--out", o.out, "dataset file");
}

int run_gen(const GenOptions& o, bool dry_run)
{
    if (o.n == 0) throw UsageError("--n must be at least 1");
    const auto domain = datagen::parse_domain(o.domain);
    if (domain == datagen::Domain::Shapes && o.side < 8) throw UsageError("--side must be at least 8");
    datagen::MeasureSamplerConfig sampler;
    sampler.onset_probability = o.onset_probability;
    sampler.rest_probability = o.rest_probability;
    sampler.max_step = o.max_step;
    sampler.max_drift = o.max_drift;
    sampler.seed = o.seed;
    try {
        sampler.validate();
    } catch (const ContractError& e) {
        throw UsageError(e.what());
    }

    const fs::path out = output_path(o.out);
    Manifest m("gen-data");
    m.set("domain", o.domain);
    m.set("n", o.n);
    m.set("seed", std::to_string(o.seed));
    if (domain == datagen::Domain::Shapes) {
        m.set("side", o.side);
    } else {
        m.set("onset_prob", o.onset_probability);
        m.set("rest_prob", o.rest_probability);
        m.set("max_step", std::to_string(o.max_step));
        m.set("max_drift", std::to_string(o.max_drift));
    }
    m.set("output", out.string());
    if (dry_run) {
        std::cout << m.text();
        return 0;
    }

    const datagen::Dataset data = domain == datagen::Domain::Shapes ? datagen::sample_shape_dataset(o.n, o.side, o.seed)
                                                                    : datagen::sample_measure_dataset(o.n, sampler);
    ensure_parent(out);
    datagen::save_dataset(out, data);
    m.set("output_digest", datagen::hex64(data.digest()));
    m.write(manifest_name(out));
    std::cout << out.string() << " digest=" << datagen::hex64(data.digest()) << '\n';
    return 0;
}

// ------------------------------------------------------------------- train

struct TrainOptions {
    std::string data;
    std::string eval;
    std::vector<std::string> attributes;
    std::vector<std::size_t> dims;
    std::optional<double> gamma;
    std::optional<double> delta;
    std::optional<double> beta;
    std::size_t epochs = 30;
    std::size_t batch = 64;
    double lr = 1e-4;
    std::size_t latent = 8;
    std::vector<std::size_t> hidden{128, 64};
    std::string activation = "relu";
    std::uint64_t seed = 0;
    bool regularize_mean = false;
    bool beta_vae = false;
    std::string out = "model.ckpt";
};

void add_train(CLI::App& app, TrainOptions& o)
{
    app.add_option("--data", o.data, "training dataset")->required();
    app.add_option("--eval", o.eval, "validation dataset for the accuracy column");
    app.add_option("--attributes", o.attributes, "regularized attributes (default: all but orientation)")
        ->delimiter(',');
    app.add_option("--dims", o.dims, "latent dimension per attribute (default 0, 1, ...)")->delimiter(',');
    app.add_option("--gamma", o.gamma, "regularization strength (shapes 10, measures 1)");
    app.add_option("--delta", o.delta, "tanh spread (shapes 1, measures 10)");
    app.add_option("--beta", o.beta, "KL weight (shapes 1, measures 0.001)");
    app.add_option("--epochs", o.epochs, "training epochs");
    app.add_option("--batch", o.batch, "batch size");
    app.add_option("--lr", o.lr, "Adam learning rate");
    app.add_option("--latent", o.latent, "latent dimensions");
    app.add_option("--hidden", o.hidden, "hidden layer widths")->delimiter(',');
    app.add_option("--activation", o.activation, "relu, selu or tanh")->check(CLI::IsMember({"relu", "selu", "tanh"}));
    app.add_option("--seed", o.seed, "initialisation and batching seed");
    app.add_flag("--regularize-mean", o.regularize_mean, "regularize encoder means instead of samples");
    app.add_flag("--beta-vae", o.beta_vae, "train the plain beta-VAE objective");
    app.add_option("--out", o.out, "checkpoint path");
}

struct TrainPlan {
    datagen::Dataset data;
    std::optional<datagen::Dataset> eval;
    attrreg::RegularizationSpec spec;
    attrreg::ArVaeConfig config;
    vae::MlpVaeConfig model;
};

TrainPlan plan_training(const TrainOptions& o)
{
    TrainPlan p;
    p.data = load_data(o.data);
    if (!o.eval.empty()) p.eval = load_data(o.eval);
    if (p.eval && (p.eval->domain() != p.data.domain() || p.eval->input_width() != p.data.input_width())) {
        throw UsageError("validation dataset does not match the training dataset");
    }
    const auto names = o.attributes.empty() ? default_regularized(p.data) : o.attributes;
    require_attributes(p.data, names);
    if (!o.dims.empty() && o.dims.size() != names.size()) throw UsageError("--dims needs one entry per attribute");
    if (o.latent == 0) throw UsageError("--latent must be positive");
    p.spec = attrreg::make_spec(p.data, names, o.dims);
    try {
        p.spec.validate(o.latent);
    } catch (const ContractError& e) {
        throw UsageError(e.what());
    }

    p.config = p.data.domain() == datagen::Domain::Measures ? attrreg::ArVaeConfig::music()
                                                            : attrreg::ArVaeConfig::images();
    if (o.gamma) p.config.gamma = *o.gamma;
    if (o.delta) p.config.delta = *o.delta;
    if (o.beta) p.config.beta = *o.beta;
    p.config.epochs = o.epochs;
    p.config.batch_size = o.batch;
    p.config.learning_rate = o.lr;
    p.config.seed = o.seed;
    p.config.regularize_mean = o.regularize_mean;
    try {
        p.config.validate();
    } catch (const ContractError& e) {
        throw UsageError(e.what());
    }
    p.model = experiments::model_config_for(p.data, o.latent, o.hidden, vae::parse_activation(o.activation));
    return p;
}

void describe(Manifest& m, const attrreg::ArVaeConfig& c)
{
    m.set("beta", c.beta);
    m.set("gamma", c.gamma);
    m.set("delta", c.delta);
    m.set("epochs", c.epochs);
    m.set("batch", c.batch_size);
    m.set("lr", c.learning_rate);
    m.set("seed", std::to_string(c.seed));
    m.set("regularize_mean", c.regularize_mean);
}

int run_train(const TrainOptions& o, bool dry_run)
{
    TrainPlan p = plan_training(o);
    const fs::path out = output_path(o.out);
    const fs::path log_path = out.string() + ".train.csv";
    Manifest m("train");
    describe(m, p.config);
    m.set("objective", o.beta_vae ? "beta-vae" : "ar-vae");
    m.set("data", o.data);
    m.set("data_digest", datagen::hex64(p.data.digest()));
    if (p.eval) {
        m.set("eval", o.eval);
        m.set("eval_digest", datagen::hex64(p.eval->digest()));
    }
    m.set("attributes", join(spec_names(p.spec)));
    std::vector<std::size_t> dims;
    for (const auto& e : p.spec.entries()) dims.push_back(e.dimension);
    m.set("dims", join(dims));
    m.set("latent", p.model.latent_dim);
    m.set("hidden", join(p.model.hidden));
    m.set("activation", vae::to_string(p.model.activation));
    m.set("output", out.string());
    m.set("train_log", log_path.string());
    if (dry_run) {
        std::cout << m.text();
        return 0;
    }

    vae::MlpVae model(p.model, p.config.seed);
    const datagen::Dataset* validation = p.eval ? &*p.eval : nullptr;
    const attrreg::TrainLog log = o.beta_vae ? attrreg::train_beta_vae(model, p.data, p.spec, p.config, validation)
                                             : attrreg::train(model, p.data, p.spec, p.config, validation);

    experiments::Checkpoint ckpt;
    ckpt.model_config = p.model;
    ckpt.parameters = model.parameters();
    ckpt.spec = p.spec;
    ckpt.train_config = p.config;
    ckpt.beta_vae = o.beta_vae;
    ckpt.domain = experiments::DomainInfo::of(p.data);
    ckpt.data_digest = datagen::hex64(p.data.digest());
    ensure_parent(out);
    experiments::save_checkpoint(out, ckpt);
    {
        auto csv = open_output(log_path);
        attrreg::write_train_log(csv, log);
    }
    m.set("config_digest", ckpt.config_digest());
    m.write(manifest_name(out));
    const auto& last = log.rows.empty() ? attrreg::TrainLogRow{} : log.rows.back();
    std::cout << out.string() << " epochs=" << log.rows.size() << " recon=" << fmt(last.recon)
              << " recon_accuracy=" << fmt(last.recon_accuracy) << '\n';
    return 0;
}

// -------------------------------------------------------------------- eval

struct EvalOptions {
    std::string checkpoint;
    std::string data;
    std::vector<std::string> attributes;
    std::size_t bins = 20;
    std::uint64_t split_seed = 0;
    bool absolute_scc = false;
    std::string out = "report.csv";
};

void add_eval(CLI::App& app, EvalOptions& o)
{
    app.add_option("--checkpoint", o.checkpoint, "model checkpoint")->required();
    app.add_option("--data", o.data, "evaluation dataset")->required();
    app.add_option("--attributes", o.attributes, "attributes to score (default: the regularized ones)")
        ->delimiter(',');
    app.add_option("--bins", o.bins, "quantile bins for mutual information");
    app.add_option("--split-seed", o.split_seed, "seed of the 50/50 regression split");
    app.add_flag("--abs-scc", o.absolute_scc, "use |rho| in SCC");
    app.add_option("--out", o.out, "report CSV");
}

int run_eval(const EvalOptions& o, bool dry_run)
{
    if (o.bins < 2) throw UsageError("--bins must be at least 2");
    const auto ckpt = load_ckpt(o.checkpoint);
    const auto data = load_data(o.data);
    auto names = o.attributes;
    if (names.empty()) names = ckpt.spec.empty() ? default_regularized(data) : spec_names(ckpt.spec);
    require_attributes(data, names);
    const fs::path out = output_path(o.out);

    Manifest m("eval");
    m.set("checkpoint", o.checkpoint);
    m.set("checkpoint_digest", ckpt.config_digest());
    m.set("data", o.data);
    m.set("data_digest", datagen::hex64(data.digest()));
    m.set("attributes", join(names));
    m.set("bins", o.bins);
    m.set("split_seed", std::to_string(o.split_seed));
    m.set("scc", o.absolute_scc ? "absolute" : "signed");
    m.set("output", out.string());
    if (dry_run) {
        std::cout << m.text();
        return 0;
    }

    check_domain(ckpt, data);
    const metrics::MetricSettings settings{o.bins, o.split_seed, o.absolute_scc};
    const auto report = experiments::evaluate_model(ckpt.model(), data, names, settings);
    {
        auto csv = open_output(out);
        metrics::write_report(csv, report);
    }
    m.write(manifest_name(out));
    std::cout << out.string() << " interpretability=" << fmt(report.interpretability.mean)
              << " mig=" << fmt(report.mig.mean) << " sap=" << fmt(report.sap.mean) << " scc=" << fmt(report.scc.mean)
              << " modularity=" << fmt(report.modularity.mean) << " recon_accuracy=" << fmt(*report.recon_accuracy)
              << '\n';
    return 0;
}

// ---------------------------------------------------------------- traverse

struct TraverseOptions {
    std::string checkpoint;
    std::string data;
    std::size_t index = 0;
    std::vector<std::string> attributes;
    double min = -4.0;
    double max = 4.0;
    std::size_t steps = 9;
    std::size_t bins = 20;
    std::string out = "traversal";
};

void add_traverse(CLI::App& app, TraverseOptions& o)
{
    app.add_option("--checkpoint", o.checkpoint, "model checkpoint")->required();
    app.add_option("--data", o.data, "dataset holding the anchor example")->required();
    app.add_option("--index", o.index, "anchor example index");
    app.add_option("--attribute", o.attributes, "attribute(s) to traverse (default: all regularized)")
        ->delimiter(',');
    app.add_option("--min", o.min, "first latent code");
    app.add_option("--max", o.max, "last latent code");
    app.add_option("--steps", o.steps, "number of codes");
    app.add_option("--bins", o.bins, "MI bins for picking beta-VAE dimensions");
    app.add_option("--out", o.out, "output prefix (.pgm or .txt, plus .csv)");
}

// Latent dimension for `name`: the regularized one, or for beta-VAE
// checkpoints the dimension with the highest MI with the attribute.
std::size_t traversal_dimension(const experiments::Checkpoint& ckpt, const vae::MlpVae& model,
                                const datagen::Dataset& data, const std::string& name, std::size_t bins)
{
    if (!ckpt.beta_vae) {
        const auto* entry = ckpt.spec.find(name);
        if (entry == nullptr) {
            throw UsageError("attribute '" + name + "' is not regularized in this checkpoint; available: " +
                             available(spec_names(ckpt.spec)));
        }
        return entry->dimension;
    }
    require_attributes(data, {name});
    const auto table = experiments::encode_table(model, data, {name});
    return metrics::most_informative_dimension(table, 0, bins);
}

int run_traverse(const TraverseOptions& o, bool dry_run)
{
    if (o.steps == 0) throw UsageError("--steps must be positive");
    const auto ckpt = load_ckpt(o.checkpoint);
    const auto data = load_data(o.data);
    if (o.index >= data.size()) throw UsageError("--index is outside the dataset");
    auto names = o.attributes.empty() ? spec_names(ckpt.spec) : o.attributes;
    if (names.empty()) throw UsageError("no attribute to traverse; pass --attribute");
    if (!ckpt.beta_vae) {
        for (const auto& n : names) {
            if (!ckpt.spec.find(n)) {
                throw UsageError("attribute '" + n + "' is not regularized in this checkpoint; available: " +
                                 available(spec_names(ckpt.spec)));
            }
        }
    } else {
        require_attributes(data, names);
    }
    const bool images = ckpt.domain.domain == datagen::Domain::Shapes;
    const fs::path grid_path = output_path(o.out + (images ? ".pgm" : ".txt"));
    const fs::path csv_path = output_path(o.out + ".csv");

    Manifest m("traverse");
    m.set("checkpoint", o.checkpoint);
    m.set("checkpoint_digest", ckpt.config_digest());
    m.set("data", o.data);
    m.set("data_digest", datagen::hex64(data.digest()));
    m.set("index", o.index);
    m.set("attributes", join(names));
    m.set("min", o.min);
    m.set("max", o.max);
    m.set("steps", o.steps);
    m.set("output", grid_path.string());
    m.set("values", csv_path.string());
    if (dry_run) {
        std::cout << m.text();
        return 0;
    }

    check_domain(ckpt, data);
    const vae::MlpVae model = ckpt.model();
    const auto values = experiments::sweep_values(o.min, o.max, o.steps);
    const std::size_t anchor[] = {o.index};
    const numgrad::Tensor input = data.model_inputs(anchor);

    std::ostringstream csv;
    csv << "attribute,dimension,step,code,value\r\n";
    std::vector<numgrad::Tensor> outputs;
    std::ostringstream rolls;
    for (const auto& name : names) {
        const std::size_t dim = traversal_dimension(ckpt, model, data, name, o.bins);
        numgrad::Tensor decoded = experiments::traverse(model, input.values(), dim, values);
        const std::size_t w = decoded.cols();
        for (std::size_t k = 0; k < values.size(); ++k) {
            const std::span<const double> row(decoded.data() + k * w, w);
            csv << name << ',' << dim << ',' << k << ',' << fmt(values[k]) << ',';
            if (experiments::can_measure(ckpt.domain, name)) csv << fmt(experiments::decoded_attribute(ckpt.domain, row, name));
            csv << "\r\n";
            if (!images) {
                const auto measure = experiments::decode_measure(row, ckpt.domain.vocabulary);
                rolls << "# attribute=" << name << " dimension=" << dim << " step=" << k << " code=" << fmt(values[k])
                      << "\n" << measure.to_string() << "\n" << experiments::piano_roll(measure) << "\n";
            }
        }
        outputs.push_back(std::move(decoded));
    }

    {
        auto out = open_output(grid_path);
        if (images) {
            const std::size_t side = ckpt.domain.side;
            std::vector<std::span<const double>> tiles;
            for (const auto& t : outputs) {
                for (std::size_t k = 0; k < values.size(); ++k) tiles.emplace_back(t.data() + k * t.cols(), t.cols());
            }
            const auto pixels = experiments::tile_images(tiles, side, names.size(), values.size());
            experiments::write_pgm(out, values.size() * side, names.size() * side, pixels);
        } else {
            out << rolls.str();
        }
    }
    {
        auto out = open_output(csv_path);
        out << csv.str();
    }
    m.write(manifest_name(grid_path));
    std::cout << grid_path.string() << ' ' << csv_path.string() << '\n';
    return 0;
}

// ----------------------------------------------------------------- surface

struct SurfaceOptions {
    std::string checkpoint;
    std::string attribute;
    std::optional<std::size_t> other_dim;
    std::size_t grid = 9;
    double min = -4.0;
    double max = 4.0;
    std::uint64_t seed = 0;
    std::string out = "surface.csv";
};

void add_surface(CLI::App& app, SurfaceOptions& o)
{
    app.add_option("--checkpoint", o.checkpoint, "model checkpoint")->required();
    app.add_option("--attribute", o.attribute, "regularized attribute on the x axis")->required();
    app.add_option("--other-dim", o.other_dim, "latent dimension on the y axis (default: first non-regularized)");
    app.add_option("--grid", o.grid, "grid resolution per axis");
    app.add_option("--min", o.min, "lowest code");
    app.add_option("--max", o.max, "highest code");
    app.add_option("--seed", o.seed, "seed for the fixed codes of the other dimensions");
    app.add_option("--out", o.out, "surface CSV");
}

int run_surface(const SurfaceOptions& o, bool dry_run)
{
    if (o.grid == 0) throw UsageError("--grid must be positive");
    const auto ckpt = load_ckpt(o.checkpoint);
    const auto* entry = ckpt.spec.find(o.attribute);
    if (entry == nullptr) {
        throw UsageError("attribute '" + o.attribute + "' is not regularized in this checkpoint; available: " +
                         available(spec_names(ckpt.spec)));
    }
    if (!experiments::can_measure(ckpt.domain, o.attribute)) {
        throw UsageError("attribute '" + o.attribute + "' cannot be measured on decoded outputs");
    }
    std::size_t other = 0;
    if (o.other_dim) {
        other = *o.other_dim;
    } else {
        std::vector<bool> used(ckpt.model_config.latent_dim, false);
        for (const auto& e : ckpt.spec.entries()) used[e.dimension] = true;
        while (other < used.size() && used[other]) ++other;
        if (other == used.size()) throw UsageError("every latent dimension is regularized; pass --other-dim");
    }
    if (other == entry->dimension) throw UsageError("--other-dim must differ from the regularized dimension");
    if (other >= ckpt.model_config.latent_dim) throw UsageError("--other-dim is outside the latent space");
    const fs::path out = output_path(o.out);

    Manifest m("surface");
    m.set("checkpoint", o.checkpoint);
    m.set("checkpoint_digest", ckpt.config_digest());
    m.set("attribute", o.attribute);
    m.set("dimension", entry->dimension);
    m.set("other_dim", other);
    m.set("grid", o.grid);
    m.set("min", o.min);
    m.set("max", o.max);
    m.set("seed", std::to_string(o.seed));
    m.set("output", out.string());
    if (dry_run) {
        std::cout << m.text();
        return 0;
    }

    const auto points =
        experiments::surface(ckpt.model(), ckpt.domain, o.attribute, entry->dimension, other, o.grid, o.min, o.max, o.seed);
    {
        auto csv = open_output(out);
        csv << "x,y," << o.attribute << "\r\n";
        for (const auto& p : points) csv << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(p.value) << "\r\n";
    }
    m.write(manifest_name(out));
    std::cout << out.string() << " rows=" << points.size() << '\n';
    return 0;
}

// ------------------------------------------------------------------- sweep

struct SweepOptions {
    TrainOptions train;
    std::vector<double> gammas{0.0, 1.0, 10.0};
    std::vector<double> deltas{1.0};
    std::size_t bins = 20;
    std::uint64_t split_seed = 0;
    std::string out = "sweep.csv";
};

void add_sweep(CLI::App& app, SweepOptions& o)
{
    auto& t = o.train;
    app.add_option("--data", t.data, "training dataset")->required();
    app.add_option("--eval", t.eval, "evaluation dataset")->required();
    app.add_option("--attributes", t.attributes, "regularized attributes")->delimiter(',');
    app.add_option("--gammas", o.gammas, "gamma grid")->delimiter(',');
    app.add_option("--deltas", o.deltas, "delta grid")->delimiter(',');
    app.add_option("--beta", t.beta, "KL weight (default 1)");
    app.add_option("--epochs", t.epochs, "training epochs per point");
    app.add_option("--batch", t.batch, "batch size");
    app.add_option("--lr", t.lr, "Adam learning rate");
    app.add_option("--latent", t.latent, "latent dimensions");
    app.add_option("--hidden", t.hidden, "hidden layer widths")->delimiter(',');
    app.add_option("--seed", t.seed, "seed shared by every grid point");
    app.add_option("--bins", o.bins, "quantile bins");
    app.add_option("--split-seed", o.split_seed, "regression split seed");
    app.add_option("--out", o.out, "sweep CSV");
}

int run_sweep(SweepOptions o, bool dry_run)
{
    if (o.gammas.empty() || o.deltas.empty()) throw UsageError("--gammas and --deltas need at least one value");
    for (double g : o.gammas) {
        if (!(g >= 0.0)) throw UsageError("gamma values must be non-negative");
    }
    for (double d : o.deltas) {
        if (!(d > 0.0)) throw UsageError("delta values must be positive");
    }
    if (!o.train.beta) o.train.beta = 1.0;
    TrainPlan p = plan_training(o.train);
    const fs::path out = output_path(o.out);

    Manifest m("sweep");
    describe(m, p.config);
    m.erase("gamma");
    m.erase("delta");
    m.set("gammas", join(o.gammas));
    m.set("deltas", join(o.deltas));
    m.set("data", o.train.data);
    m.set("data_digest", datagen::hex64(p.data.digest()));
    m.set("eval", o.train.eval);
    m.set("eval_digest", datagen::hex64(p.eval->digest()));
    m.set("attributes", join(spec_names(p.spec)));
    m.set("latent", p.model.latent_dim);
    m.set("hidden", join(p.model.hidden));
    m.set("bins", o.bins);
    m.set("split_seed", std::to_string(o.split_seed));
    m.set("output", out.string());
    if (dry_run) {
        std::cout << m.text();
        return 0;
    }

    const metrics::MetricSettings settings{o.bins, o.split_seed, false};
    const auto rows = experiments::run_sweep(p.data, *p.eval, p.model, p.spec, p.config, o.gammas, o.deltas, settings);
    {
        auto csv = open_output(out);
        csv << "gamma,delta,recon_accuracy,interpretability\r\n";
        for (const auto& r : rows) {
            csv << fmt(r.gamma) << ',' << fmt(r.delta) << ',' << fmt(r.recon_accuracy) << ',' << fmt(r.interpretability)
                << "\r\n";
        }
    }
    m.write(manifest_name(out));
    std::cout << out.string() << " rows=" << rows.size() << '\n';
    return 0;
}

// ------------------------------------------------------------- reconstruct

struct ReconstructOptions {
    std::string checkpoint;
    std::string data;
    std::size_t first = 0;
    std::size_t count = 8;
    std::string out = "reconstruction";
};

void add_reconstruct(CLI::App& app, ReconstructOptions& o)
{
    app.add_option("--checkpoint", o.checkpoint, "model checkpoint")->required();
    app.add_option("--data", o.data, "dataset")->required();
    app.add_option("--first", o.first, "first example index");
    app.add_option("--count", o.count, "number of examples");
    app.add_option("--out", o.out, "output prefix (.pgm for shapes, .txt for measures)");
}

int run_reconstruct(const ReconstructOptions& o, bool dry_run)
{
    if (o.count == 0) throw UsageError("--count must be positive");
    const auto ckpt = load_ckpt(o.checkpoint);
    const auto data = load_data(o.data);
    if (o.first + o.count > data.size()) throw UsageError("requested examples run past the end of the dataset");
    const bool images = ckpt.domain.domain == datagen::Domain::Shapes;
    const fs::path out = output_path(o.out + (images ? ".pgm" : ".txt"));

    Manifest m("reconstruct");
    m.set("checkpoint", o.checkpoint);
    m.set("checkpoint_digest", ckpt.config_digest());
    m.set("data", o.data);
    m.set("data_digest", datagen::hex64(data.digest()));
    m.set("first", o.first);
    m.set("count", o.count);
    m.set("output", out.string());
    if (dry_run) {
        std::cout << m.text();
        return 0;
    }

    check_domain(ckpt, data);
    const vae::MlpVae model = ckpt.model();
    std::vector<std::size_t> idx(o.count);
    for (std::size_t k = 0; k < o.count; ++k) idx[k] = o.first + k;
    const numgrad::Tensor x = data.model_inputs(idx);
    const numgrad::Tensor y = vae::decode_values(model, vae::encode_means(model, x));
    auto file = open_output(out);
    if (images) {
        const std::size_t side = ckpt.domain.side;
        std::vector<std::span<const double>> tiles;
        for (std::size_t k = 0; k < o.count; ++k) {
            tiles.emplace_back(x.data() + k * x.cols(), x.cols());
            tiles.emplace_back(y.data() + k * y.cols(), y.cols());
        }
        experiments::write_pgm(file, 2 * side, o.count * side, experiments::tile_images(tiles, side, o.count, 2));
    } else {
        for (std::size_t k = 0; k < o.count; ++k) {
            const auto original = data.measure(idx[k]);
            const auto decoded =
                experiments::decode_measure(std::span<const double>(y.data() + k * y.cols(), y.cols()), ckpt.domain.vocabulary);
            file << "# example " << idx[k] << "\ninput:  " << original.to_string() << "\noutput: " << decoded.to_string()
                 << "\n\n";
        }
    }
    file.close();
    m.write(manifest_name(out));
    std::cout << out.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Attribute-regularized VAE toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    bool dry_run = false;

    GenOptions gen;
    TrainOptions train;
    EvalOptions eval;
    TraverseOptions trav;
    SurfaceOptions surf;
    SweepOptions sweep;
    ReconstructOptions recon;

    struct Command {
        CLI::App* app;
        std::function<int()> run;
    };
    std::vector<Command> commands;
    auto add = [&](const char* name, const char* help, auto&& setup, std::function<int()> run) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->set_config("--config", "", "read options from a key = value file (flags take precedence)");
        sub->add_flag("--dry-run", dry_run, "print the resolved configuration and exit");
        setup(*sub);
        commands.push_back({sub, std::move(run)});
    };
    add("gen-data", "generate a synthetic dataset", [&](CLI::App& a) { add_gen(a, gen); },
        [&] { return run_gen(gen, dry_run); });
    add("train", "train an AR-VAE (or beta-VAE)", [&](CLI::App& a) { add_train(a, train); },
        [&] { return run_train(train, dry_run); });
    add("eval", "score a checkpoint with the metric suite", [&](CLI::App& a) { add_eval(a, eval); },
        [&] { return run_eval(eval, dry_run); });
    add("traverse", "decode a sweep along attribute dimensions", [&](CLI::App& a) { add_traverse(a, trav); },
        [&] { return run_traverse(trav, dry_run); });
    add("surface", "attribute values over a 2-d latent grid", [&](CLI::App& a) { add_surface(a, surf); },
        [&] { return run_surface(surf, dry_run); });
    add("sweep", "gamma/delta sensitivity sweep", [&](CLI::App& a) { add_sweep(a, sweep); },
        [&] { return run_sweep(sweep, dry_run); });
    add("reconstruct", "inputs next to their reconstructions", [&](CLI::App& a) { add_reconstruct(a, recon); },
        [&] { return run_reconstruct(recon, dry_run); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& c : commands) {
            if (c.app->parsed()) return c.run();
        }
    } catch (const UsageError& e) {
        std::cerr << "arvae: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "arvae: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
