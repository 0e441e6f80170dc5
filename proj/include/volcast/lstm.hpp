#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "volcast/rng.hpp"

namespace volcast::nn {

// Minimal row-major dense matrix; sizes here never exceed a few hundred.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

using Vec = std::vector<double>;

enum class Activation { tanh, relu, sigmoid };

Activation activation_from_string(const std::string& name);
std::string to_string(Activation a);

double apply_activation(Activation a, double x);
// Derivative expressed through the activation's output value (for relu a
// value of 0 means a dead unit).
double activation_grad_from_value(Activation a, double value);

enum class LossKind { mse, mae, madl };

LossKind loss_from_string(const std::string& name);
std::string to_string(LossKind k);

// Gate order inside the per-gate arrays.
inline constexpr std::size_t kForget = 0;
inline constexpr std::size_t kInput = 1;
inline constexpr std::size_t kCandidate = 2;
inline constexpr std::size_t kOutput = 3;

// One recurrent layer. The forget/input/output gates are always sigmoid;
// `activation` drives the candidate state and the cell-to-hidden transform.
struct LstmLayer {
    std::array<Mat, 4> input_weights;   // U_g: units x input_dim
    std::array<Mat, 4> hidden_weights;  // V_g: units x units
    std::array<Vec, 4> biases;          // b_g: units
    std::size_t units = 0;
    Activation activation = Activation::tanh;
    double recurrent_dropout = 0.0;
};

struct DenseLayer {
    Mat weights;  // out x in
    Vec biases;
    Activation activation = Activation::tanh;
};

struct OutputHead {
    Vec weights;
    double bias = 0.0;
};

struct LstmNetwork {
    std::vector<LstmLayer> lstm;
    std::vector<DenseLayer> dense;
    OutputHead head;
    LossKind loss = LossKind::mse;
    double dropout = 0.0;  // dense-layer input dropout rate
    std::size_t input_dim = 0;
};

// Glorot-uniform weights, forget-gate biases at 1, other biases at 0.
void init_weights(LstmNetwork& net, Rng& rng);

// Dropout masks for one training batch: one fixed mask per LSTM layer
// applied to h_{t-1} inside the gate pre-activations, plus one mask per
// dense layer applied to that layer's input. Inference uses no masks.
struct DropoutMasks {
    std::vector<Vec> recurrent;  // per LSTM layer, length = units
    std::vector<Vec> dense;      // per dense layer, length = layer input dim
};

DropoutMasks make_inference_masks(const LstmNetwork& net);
DropoutMasks sample_dropout_masks(const LstmNetwork& net, Rng& rng);

// One cell update: gates from x_t and h_prev, new cell and hidden state.
void lstm_cell_step(const LstmLayer& layer, const Vec& x_t, const Vec& h_prev,
                    const Vec& c_prev, const Vec& recurrent_mask, Vec& h_out,
                    Vec& c_out);

// Full forward pass over a (lookback x features) sequence; initial hidden
// and cell states are zero. Dropout is inactive.
double forward(const LstmNetwork& net, const Mat& sequence);

// All per-step intermediates kept for backpropagation through time.
struct ForwardCache {
    struct LayerStep {
        Vec input;                 // x_t as seen by this layer
        std::array<Vec, 4> gates;  // post-activation f, i, g, o
        Vec cell;
        Vec cell_act;  // activation(cell)
        Vec hidden;
    };
    std::vector<std::vector<LayerStep>> steps;  // [layer][time]
    std::vector<Vec> dense_inputs;              // post-dropout inputs per dense layer
    std::vector<Vec> dense_outputs;
    Vec head_input;
    double prediction = 0.0;
};

double forward_cached(const LstmNetwork& net, const Mat& sequence,
                      const DropoutMasks& masks, ForwardCache& cache);

// Gradient containers share the network's own shape.
LstmNetwork zero_like(const LstmNetwork& net);

// Accumulates (+=) the gradient of d_prediction = dLoss/dPrediction through
// the whole unrolled network into `grads`.
void backward(const LstmNetwork& net, const DropoutMasks& masks,
              const ForwardCache& cache, double d_prediction,
              LstmNetwork& grads);

std::size_t param_count(const LstmNetwork& net);

// Visits every trainable parameter in a fixed order, pairing two
// identically shaped networks (weights with gradients, usually).
template <typename F>
void for_each_param(LstmNetwork& a, LstmNetwork& b, F&& fn) {
    for (std::size_t l = 0; l < a.lstm.size(); ++l) {
        for (std::size_t g = 0; g < 4; ++g) {
            auto& ua = a.lstm[l].input_weights[g].a;
            auto& ub = b.lstm[l].input_weights[g].a;
            for (std::size_t i = 0; i < ua.size(); ++i) fn(ua[i], ub[i]);
            auto& va = a.lstm[l].hidden_weights[g].a;
            auto& vb = b.lstm[l].hidden_weights[g].a;
            for (std::size_t i = 0; i < va.size(); ++i) fn(va[i], vb[i]);
            auto& ba = a.lstm[l].biases[g];
            auto& bb = b.lstm[l].biases[g];
            for (std::size_t i = 0; i < ba.size(); ++i) fn(ba[i], bb[i]);
        }
    }
    for (std::size_t l = 0; l < a.dense.size(); ++l) {
        auto& wa = a.dense[l].weights.a;
        auto& wb = b.dense[l].weights.a;
        for (std::size_t i = 0; i < wa.size(); ++i) fn(wa[i], wb[i]);
        auto& ba = a.dense[l].biases;
        auto& bb = b.dense[l].biases;
        for (std::size_t i = 0; i < ba.size(); ++i) fn(ba[i], bb[i]);
    }
    for (std::size_t i = 0; i < a.head.weights.size(); ++i)
        fn(a.head.weights[i], b.head.weights[i]);
    fn(a.head.bias, b.head.bias);
}

template <typename F>
void for_each_param(LstmNetwork& a, F&& fn) {
    for_each_param(a, a, [&](double& x, double&) { fn(x); });
}

// Versioned JSON round-trip: hyperparameter fields plus flat row-major
// weight arrays with declared shapes.
std::string network_to_json(const LstmNetwork& net);
LstmNetwork network_from_json(const std::string& text);

}  // namespace volcast::nn
