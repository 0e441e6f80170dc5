#include "volcast/lstm.hpp"

#include <cmath>

#include <json.hpp>

#include "volcast/errors.hpp"

namespace volcast::nn {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y = M * x, accumulated into out.
void matvec_add(const Mat& m, const Vec& x, Vec& out) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* row = m.a.data() + r * m.cols;
        double s = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) s += row[c] * x[c];
        out[r] += s;
    }
}

// out += M^T * x (x has m.rows entries, out has m.cols).
void matvec_transpose_add(const Mat& m, const Vec& x, Vec& out) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* row = m.a.data() + r * m.cols;
        const double xr = x[r];
        for (std::size_t c = 0; c < m.cols; ++c) out[c] += row[c] * xr;
    }
}

// M += outer(u, v).
void outer_add(Mat& m, const Vec& u, const Vec& v) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        double* row = m.a.data() + r * m.cols;
        const double ur = u[r];
        for (std::size_t c = 0; c < m.cols; ++c) row[c] += ur * v[c];
    }
}

void glorot_fill(Mat& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& w : m.a) w = rng.uniform(-limit, limit);
}

}  // namespace

Activation activation_from_string(const std::string& name) {
    if (name == "tanh") return Activation::tanh;
    if (name == "relu") return Activation::relu;
    if (name == "sigmoid") return Activation::sigmoid;
    throw config_error("unknown activation '" + name + "'");
}

std::string to_string(Activation a) {
    switch (a) {
        case Activation::tanh: return "tanh";
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
    }
    return "?";
}

double apply_activation(Activation a, double x) {
    switch (a) {
        case Activation::tanh: return std::tanh(x);
        case Activation::relu: return x > 0.0 ? x : 0.0;
        case Activation::sigmoid: return sigmoid(x);
    }
    return x;
}

double activation_grad_from_value(Activation a, double value) {
    switch (a) {
        case Activation::tanh: return 1.0 - value * value;
        case Activation::relu: return value > 0.0 ? 1.0 : 0.0;
        case Activation::sigmoid: return value * (1.0 - value);
    }
    return 1.0;
}

LossKind loss_from_string(const std::string& name) {
    if (name == "mse") return LossKind::mse;
    if (name == "mae") return LossKind::mae;
    if (name == "madl") return LossKind::madl;
    throw config_error("unknown loss '" + name + "'");
}

std::string to_string(LossKind k) {
    switch (k) {
        case LossKind::mse: return "mse";
        case LossKind::mae: return "mae";
        case LossKind::madl: return "madl";
    }
    return "?";
}

void init_weights(LstmNetwork& net, Rng& rng) {
    std::size_t in_dim = net.input_dim;
    for (auto& layer : net.lstm) {
        for (std::size_t g = 0; g < 4; ++g) {
            layer.input_weights[g] = Mat(layer.units, in_dim);
            glorot_fill(layer.input_weights[g], in_dim, layer.units, rng);
            layer.hidden_weights[g] = Mat(layer.units, layer.units);
            glorot_fill(layer.hidden_weights[g], layer.units, layer.units, rng);
            layer.biases[g].assign(layer.units, g == kForget ? 1.0 : 0.0);
        }
        in_dim = layer.units;
    }
    for (auto& layer : net.dense) {
        const std::size_t out_dim = layer.biases.size();
        layer.weights = Mat(out_dim, in_dim);
        glorot_fill(layer.weights, in_dim, out_dim, rng);
        layer.biases.assign(out_dim, 0.0);
        in_dim = out_dim;
    }
    net.head.weights.assign(in_dim, 0.0);
    {
        const double limit = std::sqrt(6.0 / static_cast<double>(in_dim + 1));
        for (double& w : net.head.weights) w = rng.uniform(-limit, limit);
    }
    net.head.bias = 0.0;
}

DropoutMasks make_inference_masks(const LstmNetwork& net) {
    DropoutMasks m;
    m.recurrent.reserve(net.lstm.size());
    for (const auto& layer : net.lstm) m.recurrent.emplace_back(layer.units, 1.0);
    m.dense.reserve(net.dense.size());
    for (const auto& layer : net.dense) m.dense.emplace_back(layer.weights.cols, 1.0);
    return m;
}

DropoutMasks sample_dropout_masks(const LstmNetwork& net, Rng& rng) {
    DropoutMasks m = make_inference_masks(net);
    for (std::size_t l = 0; l < net.lstm.size(); ++l) {
        const double rate = net.lstm[l].recurrent_dropout;
        if (rate <= 0.0) continue;
        // Inverted dropout: surviving units are scaled by 1/(1-rate).
        for (double& v : m.recurrent[l])
            v = rng.uniform() < rate ? 0.0 : 1.0 / (1.0 - rate);
    }
    for (std::size_t l = 0; l < net.dense.size(); ++l) {
        const double rate = net.dropout;
        if (rate <= 0.0) continue;
        for (double& v : m.dense[l])
            v = rng.uniform() < rate ? 0.0 : 1.0 / (1.0 - rate);
    }
    return m;
}

void lstm_cell_step(const LstmLayer& layer, const Vec& x_t, const Vec& h_prev,
                    const Vec& c_prev, const Vec& recurrent_mask, Vec& h_out,
                    Vec& c_out) {
    const std::size_t n = layer.units;
    if (x_t.size() != layer.input_weights[0].cols || h_prev.size() != n ||
        c_prev.size() != n)
        throw data_error("lstm_cell_step: dimension mismatch");

    Vec masked_h(n);
    for (std::size_t i = 0; i < n; ++i) masked_h[i] = recurrent_mask[i] * h_prev[i];

    std::array<Vec, 4> pre;
    for (std::size_t g = 0; g < 4; ++g) {
        pre[g] = layer.biases[g];
        matvec_add(layer.input_weights[g], x_t, pre[g]);
        matvec_add(layer.hidden_weights[g], masked_h, pre[g]);
    }
    h_out.resize(n);
    c_out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = sigmoid(pre[kForget][i]);
        const double in = sigmoid(pre[kInput][i]);
        const double o = sigmoid(pre[kOutput][i]);
        const double g = apply_activation(layer.activation, pre[kCandidate][i]);
        c_out[i] = f * c_prev[i] + in * g;
        h_out[i] = o * apply_activation(layer.activation, c_out[i]);
    }
}

double forward_cached(const LstmNetwork& net, const Mat& sequence,
                      const DropoutMasks& masks, ForwardCache& cache) {
    if (sequence.cols != net.input_dim)
        throw data_error("forward: sequence feature count does not match network");
    if (sequence.rows == 0) throw data_error("forward: empty sequence");

    const std::size_t steps = sequence.rows;
    cache.steps.assign(net.lstm.size(), {});

    Vec input;
    std::vector<Vec> h(net.lstm.size()), c(net.lstm.size());
    for (std::size_t l = 0; l < net.lstm.size(); ++l) {
        h[l].assign(net.lstm[l].units, 0.0);
        c[l].assign(net.lstm[l].units, 0.0);
        cache.steps[l].resize(steps);
    }

    for (std::size_t t = 0; t < steps; ++t) {
        input.assign(sequence.a.begin() + static_cast<std::ptrdiff_t>(t * sequence.cols),
                     sequence.a.begin() + static_cast<std::ptrdiff_t>((t + 1) * sequence.cols));
        for (std::size_t l = 0; l < net.lstm.size(); ++l) {
            const LstmLayer& layer = net.lstm[l];
            const std::size_t n = layer.units;
            auto& step = cache.steps[l][t];
            step.input = input;

            Vec masked_h(n);
            for (std::size_t i = 0; i < n; ++i)
                masked_h[i] = masks.recurrent[l][i] * h[l][i];

            std::array<Vec, 4> pre;
            for (std::size_t g = 0; g < 4; ++g) {
                pre[g] = layer.biases[g];
                matvec_add(layer.input_weights[g], input, pre[g]);
                matvec_add(layer.hidden_weights[g], masked_h, pre[g]);
            }
            for (std::size_t g = 0; g < 4; ++g) step.gates[g].resize(n);
            step.cell.resize(n);
            step.cell_act.resize(n);
            step.hidden.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double f = sigmoid(pre[kForget][i]);
                const double in = sigmoid(pre[kInput][i]);
                const double o = sigmoid(pre[kOutput][i]);
                const double g = apply_activation(layer.activation, pre[kCandidate][i]);
                step.gates[kForget][i] = f;
                step.gates[kInput][i] = in;
                step.gates[kOutput][i] = o;
                step.gates[kCandidate][i] = g;
                step.cell[i] = f * c[l][i] + in * g;
                step.cell_act[i] = apply_activation(layer.activation, step.cell[i]);
                step.hidden[i] = o * step.cell_act[i];
            }
            h[l] = step.hidden;
            c[l] = step.cell;
            input = h[l];
        }
    }

    // Dense stack on the top layer's final hidden state.
    cache.dense_inputs.clear();
    cache.dense_outputs.clear();
    Vec z = h.back();
    for (std::size_t d = 0; d < net.dense.size(); ++d) {
        const DenseLayer& layer = net.dense[d];
        Vec masked(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) masked[i] = masks.dense[d][i] * z[i];
        cache.dense_inputs.push_back(masked);
        Vec out = layer.biases;
        matvec_add(layer.weights, masked, out);
        for (double& v : out) v = apply_activation(layer.activation, v);
        cache.dense_outputs.push_back(out);
        z = std::move(out);
    }
    cache.head_input = z;
    double y = net.head.bias;
    for (std::size_t i = 0; i < z.size(); ++i) y += net.head.weights[i] * z[i];
    cache.prediction = y;
    return y;
}

double forward(const LstmNetwork& net, const Mat& sequence) {
    ForwardCache cache;
    return forward_cached(net, sequence, make_inference_masks(net), cache);
}

LstmNetwork zero_like(const LstmNetwork& net) {
    LstmNetwork g = net;
    for_each_param(g, [](double& w) { w = 0.0; });
    return g;
}

void backward(const LstmNetwork& net, const DropoutMasks& masks,
              const ForwardCache& cache, double d_prediction,
              LstmNetwork& grads) {
    const std::size_t n_layers = net.lstm.size();
    const std::size_t steps = cache.steps.empty() ? 0 : cache.steps[0].size();

    // Head.
    grads.head.bias += d_prediction;
    Vec dz(cache.head_input.size());
    for (std::size_t i = 0; i < dz.size(); ++i) {
        grads.head.weights[i] += d_prediction * cache.head_input[i];
        dz[i] = d_prediction * net.head.weights[i];
    }

    // Dense stack, last to first.
    for (std::size_t d = net.dense.size(); d-- > 0;) {
        const DenseLayer& layer = net.dense[d];
        const Vec& out = cache.dense_outputs[d];
        const Vec& in = cache.dense_inputs[d];
        Vec dpre(out.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            dpre[i] = dz[i] * activation_grad_from_value(layer.activation, out[i]);
        for (std::size_t i = 0; i < dpre.size(); ++i)
            grads.dense[d].biases[i] += dpre[i];
        outer_add(grads.dense[d].weights, dpre, in);
        Vec din(layer.weights.cols, 0.0);
        matvec_transpose_add(layer.weights, dpre, din);
        for (std::size_t i = 0; i < din.size(); ++i) din[i] *= masks.dense[d][i];
        dz = std::move(din);
    }

    // Backpropagation through time.
    std::vector<Vec> dh(n_layers), dc(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        dh[l].assign(net.lstm[l].units, 0.0);
        dc[l].assign(net.lstm[l].units, 0.0);
    }
    for (std::size_t i = 0; i < dz.size(); ++i) dh[n_layers - 1][i] += dz[i];

    Vec masked_h, dpre_f, dpre_i, dpre_g, dpre_o, dx;
    for (std::size_t t = steps; t-- > 0;) {
        for (std::size_t l = n_layers; l-- > 0;) {
            const LstmLayer& layer = net.lstm[l];
            const std::size_t n = layer.units;
            const auto& step = cache.steps[l][t];
            const Vec* h_prev = t > 0 ? &cache.steps[l][t - 1].hidden : nullptr;
            const Vec* c_prev = t > 0 ? &cache.steps[l][t - 1].cell : nullptr;

            masked_h.assign(n, 0.0);
            if (h_prev)
                for (std::size_t i = 0; i < n; ++i)
                    masked_h[i] = masks.recurrent[l][i] * (*h_prev)[i];

            dpre_f.resize(n);
            dpre_i.resize(n);
            dpre_g.resize(n);
            dpre_o.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double f = step.gates[kForget][i];
                const double in = step.gates[kInput][i];
                const double o = step.gates[kOutput][i];
                const double g = step.gates[kCandidate][i];

                const double dhi = dh[l][i];
                dpre_o[i] = dhi * step.cell_act[i] * o * (1.0 - o);
                dc[l][i] += dhi * o *
                            activation_grad_from_value(layer.activation, step.cell_act[i]);

                const double dci = dc[l][i];
                const double cp = c_prev ? (*c_prev)[i] : 0.0;
                dpre_f[i] = dci * cp * f * (1.0 - f);
                dpre_i[i] = dci * g * in * (1.0 - in);
                dpre_g[i] = dci * in *
                            activation_grad_from_value(layer.activation, g);
                dc[l][i] = dci * f;
            }

            auto& gl = grads.lstm[l];
            const std::array<const Vec*, 4> dpre = {&dpre_f, &dpre_i, &dpre_g, &dpre_o};
            dx.assign(step.input.size(), 0.0);
            Vec dh_prev(n, 0.0);
            for (std::size_t g = 0; g < 4; ++g) {
                outer_add(gl.input_weights[g], *dpre[g], step.input);
                outer_add(gl.hidden_weights[g], *dpre[g], masked_h);
                for (std::size_t i = 0; i < n; ++i) gl.biases[g][i] += (*dpre[g])[i];
                matvec_transpose_add(layer.input_weights[g], *dpre[g], dx);
                matvec_transpose_add(layer.hidden_weights[g], *dpre[g], dh_prev);
            }
            for (std::size_t i = 0; i < n; ++i)
                dh_prev[i] *= masks.recurrent[l][i];
            dh[l] = std::move(dh_prev);
            if (l > 0)
                for (std::size_t i = 0; i < dx.size(); ++i) dh[l - 1][i] += dx[i];
        }
    }
}

std::size_t param_count(const LstmNetwork& net) {
    std::size_t n = 0;
    auto& mut = const_cast<LstmNetwork&>(net);
    for_each_param(mut, [&](double&) { ++n; });
    return n;
}

std::string network_to_json(const LstmNetwork& net) {
    using nlohmann::json;
    json j;
    j["format_version"] = 1;
    j["input_dim"] = net.input_dim;
    j["loss"] = to_string(net.loss);
    j["dropout"] = net.dropout;
    static constexpr const char* gate_names[4] = {"forget", "input", "candidate",
                                                  "output"};
    j["lstm"] = json::array();
    for (const auto& layer : net.lstm) {
        json lj;
        lj["units"] = layer.units;
        lj["activation"] = to_string(layer.activation);
        lj["recurrent_dropout"] = layer.recurrent_dropout;
        for (std::size_t g = 0; g < 4; ++g) {
            lj["input_weights"][gate_names[g]] = {
                {"shape", {layer.input_weights[g].rows, layer.input_weights[g].cols}},
                {"data", layer.input_weights[g].a}};
            lj["hidden_weights"][gate_names[g]] = {
                {"shape", {layer.hidden_weights[g].rows, layer.hidden_weights[g].cols}},
                {"data", layer.hidden_weights[g].a}};
            lj["biases"][gate_names[g]] = layer.biases[g];
        }
        j["lstm"].push_back(std::move(lj));
    }
    j["dense"] = json::array();
    for (const auto& layer : net.dense) {
        j["dense"].push_back(
            {{"activation", to_string(layer.activation)},
             {"weights",
              {{"shape", {layer.weights.rows, layer.weights.cols}},
               {"data", layer.weights.a}}},
             {"biases", layer.biases}});
    }
    j["head"] = {{"weights", net.head.weights}, {"bias", net.head.bias}};
    return j.dump(2) + "\n";
}

namespace {

nn::Mat mat_from_json(const nlohmann::json& j) {
    Mat m(j["shape"][0].get<std::size_t>(), j["shape"][1].get<std::size_t>());
    m.a = j["data"].get<std::vector<double>>();
    if (m.a.size() != m.rows * m.cols)
        throw data_error("network json: weight array does not match its shape");
    return m;
}

}  // namespace

LstmNetwork network_from_json(const std::string& text) {
    using nlohmann::json;
    json j = json::parse(text);
    if (j.at("format_version").get<int>() != 1)
        throw data_error("unsupported network format version");
    LstmNetwork net;
    net.input_dim = j.at("input_dim").get<std::size_t>();
    net.loss = loss_from_string(j.at("loss").get<std::string>());
    net.dropout = j.at("dropout").get<double>();
    static constexpr const char* gate_names[4] = {"forget", "input", "candidate",
                                                  "output"};
    for (const auto& lj : j.at("lstm")) {
        LstmLayer layer;
        layer.units = lj.at("units").get<std::size_t>();
        layer.activation = activation_from_string(lj.at("activation").get<std::string>());
        layer.recurrent_dropout = lj.at("recurrent_dropout").get<double>();
        for (std::size_t g = 0; g < 4; ++g) {
            layer.input_weights[g] = mat_from_json(lj.at("input_weights").at(gate_names[g]));
            layer.hidden_weights[g] = mat_from_json(lj.at("hidden_weights").at(gate_names[g]));
            layer.biases[g] = lj.at("biases").at(gate_names[g]).get<Vec>();
        }
        net.lstm.push_back(std::move(layer));
    }
    for (const auto& dj : j.at("dense")) {
        DenseLayer layer;
        layer.activation = activation_from_string(dj.at("activation").get<std::string>());
        layer.weights = mat_from_json(dj.at("weights"));
        layer.biases = dj.at("biases").get<Vec>();
        net.dense.push_back(std::move(layer));
    }
    net.head.weights = j.at("head").at("weights").get<Vec>();
    net.head.bias = j.at("head").at("bias").get<double>();
    return net;
}

}  // namespace volcast::nn
