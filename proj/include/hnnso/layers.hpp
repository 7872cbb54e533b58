#pragma once

#include "hnnso/linalg.hpp"

namespace hnnso {

/// One bilinear tensor layer: a tanh hidden projection of the input,
/// concatenated with the input and pushed through a per-output-slice
/// quadratic form plus a linear term.
///
///   h = tanh(w_h x + b_h)
///   c = [x; h]
///   y = tanh(c^T T c + W c + b)   (slice k of T feeds output k)
///
/// The same struct doubles as the gradient holder for its own parameters.
struct BilinearTensorLayer {
    Matrix w_h;  // hidden x n_in
    Vector b_h;  // hidden
    Tensor3 t;   // concat x concat x n_out, concat = n_in + hidden
    Matrix w;    // n_out x concat
    Vector b;    // n_out

    std::size_t n_in() const { return w_h.cols(); }
    std::size_t hidden() const { return w_h.rows(); }
    std::size_t n_out() const { return b.size(); }
    std::size_t concat_dim() const { return n_in() + hidden(); }
};

/// Zero-initialized layer with consistent shapes.
BilinearTensorLayer make_bilinear_layer(std::size_t n_in, std::size_t hidden,
                                        std::size_t n_out);

BilinearTensorLayer bilinear_zeros_like(const BilinearTensorLayer& layer);

struct BilinearCache {
    Vector x;  // input
    Vector h;  // tanh hidden projection
    Vector c;  // [x; h]
    Vector y;  // output
};

/// Forward pass; fills cache for the backward pass when given.
Vector bilinear_forward(const BilinearTensorLayer& layer, const Vector& x,
                        BilinearCache* cache = nullptr);

/// Backward pass. dy is dL/dy; parameter gradients are accumulated into
/// grads (callers zero or sum across a batch); returns dL/dx.
Vector bilinear_backward(const BilinearTensorLayer& layer, const BilinearCache& cache,
                         const Vector& dy, BilinearTensorLayer& grads);

/// Gated auto-encoder over the label space. A single tensor is shared
/// between encoder and decoder: encode contracts two copies of the input
/// against modes 1 and 2, decode re-reads the same tensor with the hidden
/// code on mode 3.
///
///   h  = tanh(sum_{i,j} a[i] t(i,j,k) b[j])
///   y2 = tanh(sum_{i,k} y[i] t(i,j,k) h[k])
struct GatedAutoencoder {
    Tensor3 t;  // m x m x hidden, tied

    std::size_t label_dim() const { return t.d1(); }
    std::size_t hidden() const { return t.d3(); }
};

GatedAutoencoder make_gated_autoencoder(std::size_t label_dim, std::size_t hidden);

Vector gae_encode(const GatedAutoencoder& ae, const Vector& y1, const Vector& y2);
Vector gae_decode(const GatedAutoencoder& ae, const Vector& y1, const Vector& h);

/// Everything the backward pass needs from one full encode+decode pass.
/// The masks record, per coordinate, the derivative of each fed copy with
/// respect to the upstream label vector: all ones when the copies are the
/// clean upstream value (fine-tuning), the corruption keep-mask when a
/// copy was zero-masked, zeros when no gradient should flow at all.
struct GaeCache {
    Vector enc_a, enc_b;  // the two encoder input copies
    Vector dec_y;         // decoder input copy
    Vector mask_a, mask_b, mask_d;
    Vector h;   // encoder output
    Vector y2;  // decoder output
};

/// encode(enc_a, enc_b) then decode(dec_y, h); masks default to all ones.
Vector gae_forward(const GatedAutoencoder& ae, const Vector& enc_a, const Vector& enc_b,
                   const Vector& dec_y, GaeCache* cache = nullptr);

/// Backward pass through decode and encode. The tensor gradient picks up
/// both the encoder and decoder uses of the tied tensor and is accumulated
/// into dt. Returns the total gradient with respect to the upstream label
/// vector, aggregated over all three input copies through their masks.
Vector gae_backward(const GatedAutoencoder& ae, const GaeCache& cache, const Vector& dy_out,
                    Tensor3& dt);

}  // namespace hnnso
