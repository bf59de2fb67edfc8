#include "seqnca/checkpoint.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

#include "seqnca/errors.hpp"

namespace seqnca {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const char* where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

const json& expect_object(const json& j, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
    return j;
}

double read_double(const json& j, const char* key) {
    if (!j.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return j.get<double>();
}

std::size_t read_count(const json& j, const char* key) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ConfigError(std::string("'") + key + "' must be a nonnegative integer");
    return j.get<std::size_t>();
}

std::uint64_t read_seed(const json& j, const char* key) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                   j.get<long long>() < 0))
        throw ConfigError(std::string("'") + key + "' must be a nonnegative integer");
    return j.get<std::uint64_t>();
}

bool read_bool(const json& j, const char* key) {
    if (!j.is_boolean()) throw ConfigError(std::string("'") + key + "' must be a boolean");
    return j.get<bool>();
}

std::string read_string(const json& j, const char* key) {
    if (!j.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
    return j.get<std::string>();
}

// enum parsers throw std::invalid_argument; reissue as config errors so the
// command-line tool maps them to the config exit status
template <typename F>
auto as_config_error(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

json tensor_to_json(std::initializer_list<std::size_t> shape, const Vector& data) {
    return json{{"shape", shape}, {"data", data}};
}

Vector read_tensor(const json& j, std::initializer_list<std::size_t> shape,
                   const std::string& name) {
    if (!j.is_object() || !j.contains("shape") || !j.contains("data"))
        throw CheckpointError("weight '" + name + "' must carry shape and data");
    const json expected(shape);
    if (j.at("shape") != expected)
        throw CheckpointError("weight '" + name + "' has shape " + j.at("shape").dump() +
                              ", expected " + expected.dump());
    Vector data = j.at("data").get<Vector>();
    std::size_t total = 1;
    for (std::size_t s : shape) total *= s;
    if (data.size() != total)
        throw CheckpointError("weight '" + name + "' carries " + std::to_string(data.size()) +
                              " values for shape " + expected.dump());
    return data;
}

json model_to_json(const ModelParams& params) {
    json weights = json::object();
    json model = json::object();
    if (const auto* rnn = std::get_if<RnnParams>(&params)) {
        model["kind"] = "rnn";
        model["transfer"] = to_string(rnn->transfer);
        const std::size_t n = rnn->input_dim(), h = rnn->hidden_count(), m = rnn->output_dim();
        weights["w_xh"] = tensor_to_json({h, n}, rnn->w_xh.flat());
        weights["w_hh"] = tensor_to_json({h, h}, rnn->w_hh.flat());
        weights["w_ho"] = tensor_to_json({m, h}, rnn->w_ho.flat());
        weights["b_h"] = tensor_to_json({h}, rnn->b_h);
        weights["b_o"] = tensor_to_json({m}, rnn->b_o);
        weights["h0"] = tensor_to_json({h}, rnn->h0);
    } else {
        const auto& lstm = std::get<LstmParams>(params);
        model["kind"] = "lstm";
        const std::size_t n = lstm.input_dim(), c = lstm.cell_count(), m = lstm.output_dim();
        weights["w_xa"] = tensor_to_json({4 * c, n}, lstm.w_xa.flat());
        weights["w_ha"] = tensor_to_json({4 * c, c}, lstm.w_ha.flat());
        weights["w_ho"] = tensor_to_json({m, c}, lstm.w_ho.flat());
        weights["b_a"] = tensor_to_json({4 * c}, lstm.b_a);
        weights["b_out"] = tensor_to_json({m}, lstm.b_out);
        weights["h0"] = tensor_to_json({c}, lstm.h0);
        weights["s0"] = tensor_to_json({c}, lstm.s0);
    }
    model["weights"] = std::move(weights);
    return model;
}

void fill_matrix(Matrix& m, Vector data) { m.flat() = std::move(data); }

ModelParams model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("weights"))
        throw CheckpointError("model section must carry kind and weights");
    const std::string kind = j.at("kind").get<std::string>();
    const json& w = j.at("weights");
    if (kind == "rnn") {
        reject_unknown_keys(j, {"kind", "transfer", "weights"}, "model");
        const json& shape = w.at("w_xh").at("shape");
        const auto h = shape.at(0).get<std::size_t>();
        const auto n = shape.at(1).get<std::size_t>();
        const auto m = w.at("w_ho").at("shape").at(0).get<std::size_t>();
        RnnParams p(n, h, m,
                    as_config_error([&] {
                        return transfer_from_string(j.at("transfer").get<std::string>());
                    }));
        fill_matrix(p.w_xh, read_tensor(w.at("w_xh"), {h, n}, "w_xh"));
        fill_matrix(p.w_hh, read_tensor(w.at("w_hh"), {h, h}, "w_hh"));
        fill_matrix(p.w_ho, read_tensor(w.at("w_ho"), {m, h}, "w_ho"));
        p.b_h = read_tensor(w.at("b_h"), {h}, "b_h");
        p.b_o = read_tensor(w.at("b_o"), {m}, "b_o");
        p.h0 = read_tensor(w.at("h0"), {h}, "h0");
        p.check_shapes();
        return p;
    }
    if (kind == "lstm") {
        reject_unknown_keys(j, {"kind", "weights"}, "model");
        const json& shape = w.at("w_xa").at("shape");
        const auto four_c = shape.at(0).get<std::size_t>();
        const auto n = shape.at(1).get<std::size_t>();
        if (four_c % 4 != 0)
            throw CheckpointError("lstm gate matrix rows must be a multiple of 4");
        const std::size_t c = four_c / 4;
        const auto m = w.at("w_ho").at("shape").at(0).get<std::size_t>();
        LstmParams p(n, c, m);
        fill_matrix(p.w_xa, read_tensor(w.at("w_xa"), {4 * c, n}, "w_xa"));
        fill_matrix(p.w_ha, read_tensor(w.at("w_ha"), {4 * c, c}, "w_ha"));
        fill_matrix(p.w_ho, read_tensor(w.at("w_ho"), {m, c}, "w_ho"));
        p.b_a = read_tensor(w.at("b_a"), {4 * c}, "b_a");
        p.b_out = read_tensor(w.at("b_out"), {m}, "b_out");
        p.h0 = read_tensor(w.at("h0"), {c}, "h0");
        p.s0 = read_tensor(w.at("s0"), {c}, "s0");
        p.check_shapes();
        return p;
    }
    throw CheckpointError("unknown model kind in checkpoint: " + kind);
}

}  // namespace

json to_json(const PreprocessMode& mode) {
    return json{{"scope", to_string(mode.scope)},
                {"center", mode.center},
                {"whiten", mode.whiten}};
}

PreprocessMode preprocess_mode_from_json(const json& j) {
    expect_object(j, "preprocess");
    reject_unknown_keys(j, {"scope", "center", "whiten"}, "preprocess");
    PreprocessMode mode;
    if (j.contains("scope"))
        mode.scope = as_config_error(
            [&] { return scope_from_string(read_string(j.at("scope"), "scope")); });
    if (j.contains("center")) mode.center = read_bool(j.at("center"), "center");
    if (j.contains("whiten")) mode.whiten = read_bool(j.at("whiten"), "whiten");
    return mode;
}

json to_json(const TrainConfig& config) {
    return json{
        {"model", to_string(config.model_kind)},
        {"hidden_count", config.hidden_count},
        {"embedding_dim", config.embedding_dim},
        {"transfer", to_string(config.transfer_kind)},
        {"pool", to_string(config.pool_kind)},
        {"optimizer", to_string(config.optimizer)},
        {"sgd", {{"learning_rate", config.sgd.learning_rate}, {"momentum", config.sgd.momentum}}},
        {"rprop",
         {{"delta0", config.rprop.delta0},
          {"eta_plus", config.rprop.eta_plus},
          {"eta_minus", config.rprop.eta_minus},
          {"delta_min", config.rprop.delta_min},
          {"delta_max", config.rprop.delta_max}}},
        {"preprocess", to_json(config.preprocess)},
        {"batch_size", config.batch_size},
        {"max_epochs", config.max_epochs},
        {"patience", config.patience},
        {"validation_fraction", config.validation_fraction},
        {"seed", config.seed},
        {"grad_clip", config.grad_clip},
    };
}

TrainConfig train_config_from_json(const json& j) {
    expect_object(j, "config");
    reject_unknown_keys(j,
                        {"model", "hidden_count", "embedding_dim", "transfer", "pool",
                         "optimizer", "sgd", "rprop", "preprocess", "batch_size", "max_epochs",
                         "patience", "validation_fraction", "seed", "grad_clip"},
                        "config");
    TrainConfig config;
    if (j.contains("model"))
        config.model_kind = as_config_error(
            [&] { return model_from_string(read_string(j.at("model"), "model")); });
    if (j.contains("hidden_count"))
        config.hidden_count = read_count(j.at("hidden_count"), "hidden_count");
    if (j.contains("embedding_dim"))
        config.embedding_dim = read_count(j.at("embedding_dim"), "embedding_dim");
    if (j.contains("transfer"))
        config.transfer_kind = as_config_error(
            [&] { return transfer_from_string(read_string(j.at("transfer"), "transfer")); });
    if (j.contains("pool"))
        config.pool_kind = as_config_error(
            [&] { return pool_from_string(read_string(j.at("pool"), "pool")); });
    if (j.contains("optimizer"))
        config.optimizer = as_config_error(
            [&] { return optimizer_from_string(read_string(j.at("optimizer"), "optimizer")); });
    if (j.contains("sgd")) {
        const json& s = expect_object(j.at("sgd"), "sgd");
        reject_unknown_keys(s, {"learning_rate", "momentum"}, "sgd");
        if (s.contains("learning_rate"))
            config.sgd.learning_rate = read_double(s.at("learning_rate"), "learning_rate");
        if (s.contains("momentum"))
            config.sgd.momentum = read_double(s.at("momentum"), "momentum");
    }
    if (j.contains("rprop")) {
        const json& r = expect_object(j.at("rprop"), "rprop");
        reject_unknown_keys(r, {"delta0", "eta_plus", "eta_minus", "delta_min", "delta_max"},
                            "rprop");
        if (r.contains("delta0")) config.rprop.delta0 = read_double(r.at("delta0"), "delta0");
        if (r.contains("eta_plus"))
            config.rprop.eta_plus = read_double(r.at("eta_plus"), "eta_plus");
        if (r.contains("eta_minus"))
            config.rprop.eta_minus = read_double(r.at("eta_minus"), "eta_minus");
        if (r.contains("delta_min"))
            config.rprop.delta_min = read_double(r.at("delta_min"), "delta_min");
        if (r.contains("delta_max"))
            config.rprop.delta_max = read_double(r.at("delta_max"), "delta_max");
    }
    if (j.contains("preprocess"))
        config.preprocess = preprocess_mode_from_json(j.at("preprocess"));
    if (j.contains("batch_size"))
        config.batch_size = read_count(j.at("batch_size"), "batch_size");
    if (j.contains("max_epochs"))
        config.max_epochs = read_count(j.at("max_epochs"), "max_epochs");
    if (j.contains("patience")) config.patience = read_count(j.at("patience"), "patience");
    if (j.contains("validation_fraction"))
        config.validation_fraction =
            read_double(j.at("validation_fraction"), "validation_fraction");
    if (j.contains("seed")) config.seed = read_seed(j.at("seed"), "seed");
    if (j.contains("grad_clip")) config.grad_clip = read_double(j.at("grad_clip"), "grad_clip");
    config.validate();
    return config;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    return train_config_from_json(j);
}

namespace {

template <typename T, typename F>
std::vector<T> read_candidates(const json& j, const char* key, F&& parse_one) {
    if (!j.is_array() || j.empty())
        throw ConfigError(std::string("'") + key + "' must be a nonempty array");
    std::vector<T> out;
    out.reserve(j.size());
    for (const json& item : j) out.push_back(parse_one(item));
    return out;
}

}  // namespace

SearchSpace search_space_from_json(const json& j) {
    expect_object(j, "search space");
    reject_unknown_keys(j,
                        {"model", "hidden_count", "embedding_dim", "transfer", "pool",
                         "optimizer", "learning_rate", "momentum", "rprop_delta0", "preprocess",
                         "batch_size", "max_epochs", "patience", "validation_fraction",
                         "grad_clip", "select_by"},
                        "search space");
    SearchSpace space;
    if (j.contains("model"))
        space.model_kinds = read_candidates<ModelKind>(j.at("model"), "model", [](const json& v) {
            return as_config_error([&] { return model_from_string(read_string(v, "model")); });
        });
    if (j.contains("hidden_count"))
        space.hidden_counts = read_candidates<std::size_t>(
            j.at("hidden_count"), "hidden_count",
            [](const json& v) { return read_count(v, "hidden_count"); });
    if (j.contains("embedding_dim"))
        space.embedding_dims = read_candidates<std::size_t>(
            j.at("embedding_dim"), "embedding_dim",
            [](const json& v) { return read_count(v, "embedding_dim"); });
    if (j.contains("transfer"))
        space.transfers =
            read_candidates<Transfer>(j.at("transfer"), "transfer", [](const json& v) {
                return as_config_error(
                    [&] { return transfer_from_string(read_string(v, "transfer")); });
            });
    if (j.contains("pool"))
        space.pools = read_candidates<PoolKind>(j.at("pool"), "pool", [](const json& v) {
            return as_config_error([&] { return pool_from_string(read_string(v, "pool")); });
        });
    if (j.contains("optimizer"))
        space.optimizers =
            read_candidates<OptimizerKind>(j.at("optimizer"), "optimizer", [](const json& v) {
                return as_config_error(
                    [&] { return optimizer_from_string(read_string(v, "optimizer")); });
            });
    if (j.contains("learning_rate"))
        space.learning_rates = read_candidates<double>(
            j.at("learning_rate"), "learning_rate",
            [](const json& v) { return read_double(v, "learning_rate"); });
    if (j.contains("momentum"))
        space.momenta =
            read_candidates<double>(j.at("momentum"), "momentum",
                                    [](const json& v) { return read_double(v, "momentum"); });
    if (j.contains("rprop_delta0"))
        space.delta0s = read_candidates<double>(
            j.at("rprop_delta0"), "rprop_delta0",
            [](const json& v) { return read_double(v, "rprop_delta0"); });
    if (j.contains("preprocess"))
        space.preprocess_modes = read_candidates<PreprocessMode>(
            j.at("preprocess"), "preprocess",
            [](const json& v) { return preprocess_mode_from_json(v); });
    if (j.contains("batch_size"))
        space.batch_sizes =
            read_candidates<std::size_t>(j.at("batch_size"), "batch_size",
                                         [](const json& v) { return read_count(v, "batch_size"); });
    if (j.contains("max_epochs"))
        space.max_epochs = read_count(j.at("max_epochs"), "max_epochs");
    if (j.contains("patience")) space.patience = read_count(j.at("patience"), "patience");
    if (j.contains("validation_fraction"))
        space.validation_fraction =
            read_double(j.at("validation_fraction"), "validation_fraction");
    if (j.contains("grad_clip")) space.grad_clip = read_double(j.at("grad_clip"), "grad_clip");
    if (j.contains("select_by"))
        space.select_by = as_config_error(
            [&] { return select_by_from_string(read_string(j.at("select_by"), "select_by")); });
    space.validate();
    return space;
}

SearchSpace load_search_space(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open search space file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("search space parse error in " + path.string() + ": " + e.what());
    }
    return search_space_from_json(j);
}

json to_json(const Checkpoint& cp) {
    json j;
    j["format_version"] = cp.format_version;
    j["model"] = model_to_json(cp.params);
    j["pool"] = to_string(cp.pool_kind);
    json pre = to_json(cp.preprocess.mode);
    pre["mean"] = cp.preprocess.mean;
    pre["stddev"] = cp.preprocess.stddev;
    j["preprocess"] = std::move(pre);
    j["train_config"] = to_json(cp.config);
    j["meta"] = cp.meta;
    return j;
}

Checkpoint checkpoint_from_json(const json& j) {
    try {
        expect_object(j, "checkpoint");
        if (!j.contains("format_version"))
            throw CheckpointError("checkpoint carries no format_version");
        const int version = j.at("format_version").get<int>();
        if (version != Checkpoint::current_version)
            throw CheckpointError("unsupported checkpoint format version " +
                                  std::to_string(version) + " (this build reads version " +
                                  std::to_string(Checkpoint::current_version) + ")");
        reject_unknown_keys(
            j, {"format_version", "model", "pool", "preprocess", "train_config", "meta"},
            "checkpoint");

        Checkpoint cp;
        cp.format_version = version;
        cp.params = model_from_json(j.at("model"));
        cp.pool_kind = as_config_error(
            [&] { return pool_from_string(j.at("pool").get<std::string>()); });
        const json& pre = expect_object(j.at("preprocess"), "preprocess");
        reject_unknown_keys(pre, {"scope", "center", "whiten", "mean", "stddev"}, "preprocess");
        cp.preprocess.mode = preprocess_mode_from_json(
            json{{"scope", pre.at("scope")}, {"center", pre.at("center")},
                 {"whiten", pre.at("whiten")}});
        cp.preprocess.mean = pre.at("mean").get<Vector>();
        cp.preprocess.stddev = pre.at("stddev").get<Vector>();
        cp.config = train_config_from_json(j.at("train_config"));
        if (j.contains("meta")) cp.meta = j.at("meta");
        return cp;
    } catch (const json::exception& e) {
        throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
    } catch (const ConfigError& e) {
        throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
    }
}

void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw CheckpointError("cannot write checkpoint: " + path.string());
    out << to_json(cp).dump(2) << '\n';
    if (!out) throw CheckpointError("checkpoint write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("cannot open checkpoint: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw CheckpointError("checkpoint parse error in " + path.string() + ": " + e.what());
    }
    return checkpoint_from_json(j);
}

json to_json(const EpochStats& stats, std::size_t epoch) {
    return json{{"epoch", epoch},
                {"objective", stats.objective},
                {"objective_rate", stats.objective_rate},
                {"train_accuracy", stats.train_accuracy},
                {"val_accuracy", stats.val_accuracy}};
}

json to_json(const EvalMetrics& metrics) {
    return json{{"stochastic_train", metrics.stochastic_train},
                {"stochastic_test", metrics.stochastic_test},
                {"knn_test", metrics.knn_test}};
}

json to_json(const TrialResult& trial) {
    json j{{"trial", trial.index},
           {"config", to_json(trial.config)},
           {"failed", trial.failed},
           {"train_accuracy", trial.train_accuracy},
           {"val_accuracy", trial.val_accuracy},
           {"best_epoch", trial.best_epoch},
           {"epochs_run", trial.epochs_run}};
    if (trial.failed) j["error"] = trial.error;
    return j;
}

}  // namespace seqnca
