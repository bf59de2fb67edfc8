#include "seqnca/models.hpp"

#include <sstream>
#include <stdexcept>

namespace seqnca {

namespace {

[[noreturn]] void bad_shape(const std::string& msg) { throw std::invalid_argument(msg); }

void check_input(const char* who, std::size_t want_dim, const Sequence& x) {
    if (x.length() == 0) bad_shape(std::string(who) + ": empty sequence");
    if (x.dim() != want_dim) {
        std::ostringstream os;
        os << who << ": sequence has dimension " << x.dim() << ", model expects " << want_dim;
        bad_shape(os.str());
    }
}

void check_backward_args(const char* who, const Sequence& x, const ForwardTrace& trace,
                         const std::vector<Vector>& output_grads, std::size_t output_dim) {
    if (trace.length() != x.length())
        bad_shape(std::string(who) + ": trace length " + std::to_string(trace.length()) +
                  " does not match sequence length " + std::to_string(x.length()));
    if (output_grads.size() != x.length())
        bad_shape(std::string(who) + ": got " + std::to_string(output_grads.size()) +
                  " output gradients for " + std::to_string(x.length()) + " timesteps");
    for (const auto& g : output_grads)
        if (g.size() != output_dim)
            bad_shape(std::string(who) + ": output gradient dimension " +
                      std::to_string(g.size()) + " vs " + std::to_string(output_dim));
}

std::size_t copy_out(std::span<double> out, std::size_t pos, const std::vector<double>& v) {
    for (double x : v) out[pos++] = x;
    return pos;
}

std::size_t copy_in(std::span<const double> in, std::size_t pos, std::vector<double>& v) {
    for (double& x : v) x = in[pos++];
    return pos;
}

}  // namespace

// ---------------------------------------------------------------- RnnParams

RnnParams::RnnParams(std::size_t input_dim, std::size_t hidden, std::size_t output_dim,
                     Transfer kind)
    : w_xh(hidden, input_dim),
      w_hh(hidden, hidden),
      w_ho(output_dim, hidden),
      b_h(hidden, 0.0),
      b_o(output_dim, 0.0),
      h0(hidden, 0.0),
      transfer(kind) {
    if (input_dim == 0 || hidden == 0 || output_dim == 0)
        bad_shape("RnnParams: all dimensions must be positive");
}

void RnnParams::check_shapes() const {
    const std::size_t h = w_xh.rows();
    if (w_hh.rows() != h || w_hh.cols() != h || w_ho.cols() != h || b_h.size() != h ||
        h0.size() != h || b_o.size() != w_ho.rows())
        bad_shape("RnnParams: inconsistent shapes");
}

std::size_t RnnParams::param_count() const {
    return w_xh.size() + w_hh.size() + w_ho.size() + b_h.size() + b_o.size() + h0.size();
}

void RnnParams::flatten(std::span<double> out) const {
    std::size_t pos = 0;
    pos = copy_out(out, pos, w_xh.flat());
    pos = copy_out(out, pos, w_hh.flat());
    pos = copy_out(out, pos, w_ho.flat());
    pos = copy_out(out, pos, b_h);
    pos = copy_out(out, pos, b_o);
    copy_out(out, pos, h0);
}

void RnnParams::unflatten(std::span<const double> in) {
    std::size_t pos = 0;
    pos = copy_in(in, pos, w_xh.flat());
    pos = copy_in(in, pos, w_hh.flat());
    pos = copy_in(in, pos, w_ho.flat());
    pos = copy_in(in, pos, b_h);
    pos = copy_in(in, pos, b_o);
    copy_in(in, pos, h0);
}

// --------------------------------------------------------------- LstmParams

LstmParams::LstmParams(std::size_t input_dim, std::size_t cells, std::size_t output_dim)
    : w_xa(4 * cells, input_dim),
      w_ha(4 * cells, cells),
      w_ho(output_dim, cells),
      b_a(4 * cells, 0.0),
      b_out(output_dim, 0.0),
      h0(cells, 0.0),
      s0(cells, 0.0) {
    if (input_dim == 0 || cells == 0 || output_dim == 0)
        bad_shape("LstmParams: all dimensions must be positive");
}

void LstmParams::check_shapes() const {
    const std::size_t c = h0.size();
    if (w_xa.rows() != 4 * c || w_ha.rows() != 4 * c || w_ha.cols() != c ||
        w_ho.cols() != c || b_a.size() != 4 * c || s0.size() != c ||
        b_out.size() != w_ho.rows())
        bad_shape("LstmParams: inconsistent shapes");
}

std::size_t LstmParams::param_count() const {
    return w_xa.size() + w_ha.size() + w_ho.size() + b_a.size() + b_out.size() + h0.size() +
           s0.size();
}

void LstmParams::flatten(std::span<double> out) const {
    std::size_t pos = 0;
    pos = copy_out(out, pos, w_xa.flat());
    pos = copy_out(out, pos, w_ha.flat());
    pos = copy_out(out, pos, b_a);
    pos = copy_out(out, pos, w_ho.flat());
    pos = copy_out(out, pos, b_out);
    pos = copy_out(out, pos, h0);
    copy_out(out, pos, s0);
}

void LstmParams::unflatten(std::span<const double> in) {
    std::size_t pos = 0;
    pos = copy_in(in, pos, w_xa.flat());
    pos = copy_in(in, pos, w_ha.flat());
    pos = copy_in(in, pos, b_a);
    pos = copy_in(in, pos, w_ho.flat());
    pos = copy_in(in, pos, b_out);
    pos = copy_in(in, pos, h0);
    copy_in(in, pos, s0);
}

// ------------------------------------------------------------------ forward

ForwardTrace rnn_forward(const RnnParams& params, const Sequence& x) {
    params.check_shapes();
    check_input("rnn_forward", params.input_dim(), x);

    const std::size_t steps = x.length();
    ForwardTrace trace;
    trace.pre.reserve(steps);
    trace.hidden.reserve(steps + 1);
    trace.outputs.reserve(steps);
    trace.hidden.push_back(params.h0);

    for (std::size_t t = 0; t < steps; ++t) {
        Vector z = affine(params.w_xh, x.step(t), params.b_h);
        add_into(z, matvec(params.w_hh, trace.hidden.back()));
        trace.pre.push_back(z);
        trace.hidden.push_back(transfer(params.transfer, z));
        trace.outputs.push_back(affine(params.w_ho, trace.hidden.back(), params.b_o));
    }
    return trace;
}

ForwardTrace lstm_forward(const LstmParams& params, const Sequence& x) {
    params.check_shapes();
    check_input("lstm_forward", params.input_dim(), x);

    const std::size_t steps = x.length();
    const std::size_t c = params.cell_count();
    ForwardTrace trace;
    trace.pre.reserve(steps);
    trace.hidden.reserve(steps + 1);
    trace.cell.reserve(steps + 1);
    trace.outputs.reserve(steps);
    trace.hidden.push_back(params.h0);
    trace.cell.push_back(params.s0);

    for (std::size_t t = 0; t < steps; ++t) {
        Vector a = affine(params.w_xa, x.step(t), params.b_a);
        add_into(a, matvec(params.w_ha, trace.hidden.back()));
        trace.pre.push_back(a);

        const Vector& s_prev = trace.cell.back();
        Vector s(c), h(c);
        for (std::size_t j = 0; j < c; ++j) {
            const double ax = a[j];
            const double gi = sigmoid(a[c + j]);
            const double gf = sigmoid(a[2 * c + j]);
            const double go = sigmoid(a[3 * c + j]);
            s[j] = gi * ax + gf * s_prev[j];
            h[j] = sigmoid(go * s[j]);
        }
        trace.cell.push_back(std::move(s));
        trace.hidden.push_back(std::move(h));
        trace.outputs.push_back(affine(params.w_ho, trace.hidden.back(), params.b_out));
    }
    return trace;
}

// ----------------------------------------------------------------- backward

RnnParams rnn_backward(const RnnParams& params, const Sequence& x, const ForwardTrace& trace,
                       const std::vector<Vector>& output_grads) {
    check_backward_args("rnn_backward", x, trace, output_grads, params.output_dim());

    RnnParams grads(params.input_dim(), params.hidden_count(), params.output_dim(),
                    params.transfer);
    const std::size_t steps = x.length();

    Vector dz_next;  // delta of the following step's pre-activation
    for (std::size_t t = steps; t-- > 0;) {
        const Vector& g_out = output_grads[t];
        const Vector& h_t = trace.hidden[t + 1];

        add_outer(grads.w_ho, g_out, h_t);
        add_into(grads.b_o, g_out);

        Vector dh = affine_transposed(params.w_ho, g_out);
        if (!dz_next.empty()) add_into(dh, affine_transposed(params.w_hh, dz_next));

        // relu derivative needs the pre-activation, sigmoid/tanh use the output
        const Vector deriv = params.transfer == Transfer::relu
                                 ? transfer_deriv(params.transfer, trace.pre[t])
                                 : transfer_deriv(params.transfer, h_t);
        Vector dz(dh.size());
        for (std::size_t j = 0; j < dz.size(); ++j) dz[j] = dh[j] * deriv[j];

        add_outer(grads.w_xh, dz, x.step(t));
        add_outer(grads.w_hh, dz, trace.hidden[t]);
        add_into(grads.b_h, dz);
        dz_next = std::move(dz);
    }
    grads.h0 = affine_transposed(params.w_hh, dz_next);
    return grads;
}

LstmParams lstm_backward(const LstmParams& params, const Sequence& x,
                         const ForwardTrace& trace,
                         const std::vector<Vector>& output_grads) {
    check_backward_args("lstm_backward", x, trace, output_grads, params.output_dim());

    LstmParams grads(params.input_dim(), params.cell_count(), params.output_dim());
    const std::size_t steps = x.length();
    const std::size_t c = params.cell_count();

    Vector da_next;            // delta of step t+1's gate inputs
    Vector ds_carry(c, 0.0);   // state delta flowing back through the forget gate
    for (std::size_t t = steps; t-- > 0;) {
        const Vector& g_out = output_grads[t];
        const Vector& h_t = trace.hidden[t + 1];
        const Vector& s_t = trace.cell[t + 1];
        const Vector& s_prev = trace.cell[t];
        const Vector& a = trace.pre[t];

        add_outer(grads.w_ho, g_out, h_t);
        add_into(grads.b_out, g_out);

        Vector dh = affine_transposed(params.w_ho, g_out);
        if (!da_next.empty()) add_into(dh, affine_transposed(params.w_ha, da_next));

        Vector da(4 * c);
        for (std::size_t j = 0; j < c; ++j) {
            const double ax = a[j];
            const double gi = sigmoid(a[c + j]);
            const double gf = sigmoid(a[2 * c + j]);
            const double go = sigmoid(a[3 * c + j]);

            // h = sigmoid(u), u = go * s
            const double du = dh[j] * h_t[j] * (1.0 - h_t[j]);
            const double dgo = du * s_t[j];
            const double ds = du * go + ds_carry[j];

            da[j] = ds * gi;                                  // cell input
            da[c + j] = ds * ax * gi * (1.0 - gi);            // input gate
            da[2 * c + j] = ds * s_prev[j] * gf * (1.0 - gf); // forget gate
            da[3 * c + j] = dgo * go * (1.0 - go);            // output gate
            ds_carry[j] = ds * gf;
        }

        add_outer(grads.w_xa, da, x.step(t));
        add_outer(grads.w_ha, da, trace.hidden[t]);
        add_into(grads.b_a, da);
        da_next = std::move(da);
    }
    grads.h0 = affine_transposed(params.w_ha, da_next);
    grads.s0 = std::move(ds_carry);
    return grads;
}

// ------------------------------------------------------------ variant level

ForwardTrace model_forward(const ModelParams& params, const Sequence& x) {
    return std::visit(
        [&](const auto& p) -> ForwardTrace {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, RnnParams>)
                return rnn_forward(p, x);
            else
                return lstm_forward(p, x);
        },
        params);
}

ModelParams model_backward(const ModelParams& params, const Sequence& x,
                           const ForwardTrace& trace,
                           const std::vector<Vector>& output_grads) {
    return std::visit(
        [&](const auto& p) -> ModelParams {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, RnnParams>)
                return rnn_backward(p, x, trace, output_grads);
            else
                return lstm_backward(p, x, trace, output_grads);
        },
        params);
}

std::size_t param_count(const ModelParams& params) {
    return std::visit([](const auto& p) { return p.param_count(); }, params);
}

std::size_t model_input_dim(const ModelParams& params) {
    return std::visit([](const auto& p) { return p.input_dim(); }, params);
}

std::size_t model_output_dim(const ModelParams& params) {
    return std::visit([](const auto& p) { return p.output_dim(); }, params);
}

Vector flatten(const ModelParams& params) {
    Vector out(param_count(params));
    flatten(params, out);
    return out;
}

void flatten(const ModelParams& params, std::span<double> out) {
    std::visit([&](const auto& p) { p.flatten(out); }, params);
}

void unflatten(ModelParams& params, std::span<const double> in) {
    std::visit([&](auto& p) { p.unflatten(in); }, params);
}

}  // namespace seqnca
