#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "seqnca/matrix.hpp"
#include "seqnca/sequence.hpp"
#include "seqnca/transfer.hpp"

namespace seqnca {

/// Vanilla recurrent network:
///   h_t = sigma(W_xh x_t + W_hh h_{t-1} + b_h),  o_t = W_ho h_t + b_o
/// The initial state h0 is a trainable parameter.
struct RnnParams {
    Matrix w_xh;   // hidden x input
    Matrix w_hh;   // hidden x hidden
    Matrix w_ho;   // output x hidden
    Vector b_h;    // hidden
    Vector b_o;    // output
    Vector h0;     // hidden, learned
    Transfer transfer = Transfer::tanh;

    RnnParams() = default;
    RnnParams(std::size_t input_dim, std::size_t hidden, std::size_t output_dim,
              Transfer kind);

    std::size_t input_dim() const { return w_xh.cols(); }
    std::size_t hidden_count() const { return w_xh.rows(); }
    std::size_t output_dim() const { return w_ho.rows(); }

    void check_shapes() const;
    std::size_t param_count() const;
    void flatten(std::span<double> out) const;
    void unflatten(std::span<const double> in);
};

/// LSTM block with gating phi(c, v) = v * sigmoid(c). The gate inputs are a
/// single concatenated affine map whose 4*cells rows are partitioned as
/// [cell input, input gate, forget gate, output gate] in that fixed order:
///   [ax ai af ao] = W_xa x_t + W_ha h_{t-1} + b_a
///   s_t = phi(ai, ax) + phi(af, s_{t-1})
///   h_t = sigmoid(phi(ao, s_t))
///   o_t = W_ho h_t + b_out
/// Note the cell input is not squashed and the hidden state gets an outer
/// sigmoid; this block is intentionally not the canonical 1997 LSTM.
struct LstmParams {
    Matrix w_xa;   // 4*cells x input
    Matrix w_ha;   // 4*cells x cells
    Matrix w_ho;   // output x cells
    Vector b_a;    // 4*cells
    Vector b_out;  // output
    Vector h0;     // cells, learned
    Vector s0;     // cells, learned

    LstmParams() = default;
    LstmParams(std::size_t input_dim, std::size_t cells, std::size_t output_dim);

    std::size_t input_dim() const { return w_xa.cols(); }
    std::size_t cell_count() const { return h0.size(); }
    std::size_t output_dim() const { return w_ho.rows(); }

    void check_shapes() const;
    std::size_t param_count() const;
    void flatten(std::span<double> out) const;
    void unflatten(std::span<const double> in);
};

/// Everything BPTT needs from a forward pass. hidden[0] (and cell[0] for
/// LSTM) hold the initial state; pre[t] and outputs[t] belong to step t+1.
struct ForwardTrace {
    std::vector<Vector> pre;      // T entries: z_t (rnn) or the 4c gate inputs a_t (lstm)
    std::vector<Vector> hidden;   // T+1 entries
    std::vector<Vector> cell;     // T+1 entries (lstm only)
    std::vector<Vector> outputs;  // T entries

    std::size_t length() const { return outputs.size(); }
};

ForwardTrace rnn_forward(const RnnParams& params, const Sequence& x);
ForwardTrace lstm_forward(const LstmParams& params, const Sequence& x);

/// Gradients of sum_t output_grads[t] . o_t with respect to every trainable
/// parameter (including h0, and s0 for LSTM), returned in a params-shaped
/// container.
RnnParams rnn_backward(const RnnParams& params, const Sequence& x,
                       const ForwardTrace& trace,
                       const std::vector<Vector>& output_grads);
LstmParams lstm_backward(const LstmParams& params, const Sequence& x,
                         const ForwardTrace& trace,
                         const std::vector<Vector>& output_grads);

using ModelParams = std::variant<RnnParams, LstmParams>;

ForwardTrace model_forward(const ModelParams& params, const Sequence& x);
ModelParams model_backward(const ModelParams& params, const Sequence& x,
                           const ForwardTrace& trace,
                           const std::vector<Vector>& output_grads);

std::size_t param_count(const ModelParams& params);
std::size_t model_input_dim(const ModelParams& params);
std::size_t model_output_dim(const ModelParams& params);
Vector flatten(const ModelParams& params);
void flatten(const ModelParams& params, std::span<double> out);
void unflatten(ModelParams& params, std::span<const double> in);

}  // namespace seqnca
