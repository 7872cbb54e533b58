#include "hnnso/layers.hpp"

#include <cmath>
#include <string>

#include "hnnso/error.hpp"

namespace hnnso {

namespace {

void require_len(const Vector& v, std::size_t want, const char* what) {
    if (v.size() != want) {
        throw ShapeError(std::string(what) + " has length " + std::to_string(v.size()) +
                         ", expected " + std::to_string(want));
    }
}

void require_cache_len(const Vector& v, std::size_t want, const char* what) {
    if (v.size() != want) {
        throw ContractError(std::string("cache field ") + what + " has length " +
                            std::to_string(v.size()) + ", expected " + std::to_string(want));
    }
}

}  // namespace

BilinearTensorLayer make_bilinear_layer(std::size_t n_in, std::size_t hidden,
                                        std::size_t n_out) {
    BilinearTensorLayer layer;
    layer.w_h = Matrix(hidden, n_in);
    layer.b_h = Vector(hidden, 0.0);
    const std::size_t c = n_in + hidden;
    layer.t = Tensor3(c, c, n_out);
    layer.w = Matrix(n_out, c);
    layer.b = Vector(n_out, 0.0);
    return layer;
}

BilinearTensorLayer bilinear_zeros_like(const BilinearTensorLayer& layer) {
    return make_bilinear_layer(layer.n_in(), layer.hidden(), layer.n_out());
}

Vector bilinear_forward(const BilinearTensorLayer& layer, const Vector& x,
                        BilinearCache* cache) {
    require_len(x, layer.n_in(), "bilinear_forward: input");

    Vector h = matvec(layer.w_h, x);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::tanh(h[i] + layer.b_h[i]);

    Vector c(layer.concat_dim());
    std::copy(x.begin(), x.end(), c.begin());
    std::copy(h.begin(), h.end(), c.begin() + x.size());

    Vector pre = bilinear_slices(layer.t, c, c);
    Vector lin = matvec(layer.w, c);
    Vector y(layer.n_out());
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = std::tanh(pre[k] + lin[k] + layer.b[k]);

    if (cache) {
        cache->x = x;
        cache->h = std::move(h);
        cache->c = std::move(c);
        cache->y = y;
    }
    return y;
}

Vector bilinear_backward(const BilinearTensorLayer& layer, const BilinearCache& cache,
                         const Vector& dy, BilinearTensorLayer& grads) {
    require_len(dy, layer.n_out(), "bilinear_backward: dy");
    require_cache_len(cache.x, layer.n_in(), "x");
    require_cache_len(cache.h, layer.hidden(), "h");
    require_cache_len(cache.c, layer.concat_dim(), "c");
    require_cache_len(cache.y, layer.n_out(), "y");

    const std::size_t n_in = layer.n_in();
    const std::size_t hid = layer.hidden();
    const std::size_t cd = layer.concat_dim();
    const std::size_t n_out = layer.n_out();
    const Vector& c = cache.c;

    // through the output tanh
    Vector dpre(n_out);
    for (std::size_t k = 0; k < n_out; ++k) dpre[k] = dy[k] * (1.0 - cache.y[k] * cache.y[k]);

    Vector dc(cd, 0.0);
    for (std::size_t k = 0; k < n_out; ++k) {
        const double g = dpre[k];
        if (g == 0.0) continue;
        const double* slice = layer.t.slice(k).data();
        double* gslice = grads.t.slice(k).data();
        // dT_k += g * c c^T; dc += g * (T_k + T_k^T) c
        for (std::size_t i = 0; i < cd; ++i) {
            const double gci = g * c[i];
            const double* row = slice + i * cd;
            double* grow = gslice + i * cd;
            double rowdot = 0.0;
            for (std::size_t j = 0; j < cd; ++j) {
                grow[j] += gci * c[j];
                rowdot += row[j] * c[j];
                dc[j] += gci * row[j];  // column contribution T_k^T c
            }
            dc[i] += g * rowdot;
        }
        // linear term
        const double* wrow = layer.w.data() + k * cd;
        double* gwrow = grads.w.data() + k * cd;
        for (std::size_t j = 0; j < cd; ++j) {
            gwrow[j] += g * c[j];
            dc[j] += g * wrow[j];
        }
        grads.b[k] += g;
    }

    // split dc, then back through the hidden projection tanh
    Vector dx(dc.begin(), dc.begin() + n_in);
    Vector dpre_h(hid);
    for (std::size_t i = 0; i < hid; ++i)
        dpre_h[i] = dc[n_in + i] * (1.0 - cache.h[i] * cache.h[i]);

    for (std::size_t i = 0; i < hid; ++i) {
        const double g = dpre_h[i];
        grads.b_h[i] += g;
        const double* wrow = layer.w_h.data() + i * n_in;
        double* gwrow = grads.w_h.data() + i * n_in;
        for (std::size_t j = 0; j < n_in; ++j) {
            gwrow[j] += g * cache.x[j];
            dx[j] += g * wrow[j];
        }
    }
    return dx;
}

GatedAutoencoder make_gated_autoencoder(std::size_t label_dim, std::size_t hidden) {
    return GatedAutoencoder{Tensor3(label_dim, label_dim, hidden)};
}

Vector gae_encode(const GatedAutoencoder& ae, const Vector& y1, const Vector& y2) {
    require_len(y1, ae.label_dim(), "gae_encode: first copy");
    require_len(y2, ae.label_dim(), "gae_encode: second copy");
    return tanh_vec(bilinear_slices(ae.t, y1, y2));
}

Vector gae_decode(const GatedAutoencoder& ae, const Vector& y1, const Vector& h) {
    require_len(y1, ae.label_dim(), "gae_decode: input copy");
    require_len(h, ae.hidden(), "gae_decode: hidden code");
    return tanh_vec(contract_13(ae.t, y1, h));
}

Vector gae_forward(const GatedAutoencoder& ae, const Vector& enc_a, const Vector& enc_b,
                   const Vector& dec_y, GaeCache* cache) {
    Vector h = gae_encode(ae, enc_a, enc_b);
    Vector y2 = gae_decode(ae, dec_y, h);
    if (cache) {
        const Vector ones(ae.label_dim(), 1.0);
        cache->enc_a = enc_a;
        cache->enc_b = enc_b;
        cache->dec_y = dec_y;
        if (cache->mask_a.empty()) cache->mask_a = ones;
        if (cache->mask_b.empty()) cache->mask_b = ones;
        if (cache->mask_d.empty()) cache->mask_d = ones;
        cache->h = std::move(h);
        cache->y2 = y2;
    }
    return y2;
}

Vector gae_backward(const GatedAutoencoder& ae, const GaeCache& cache, const Vector& dy_out,
                    Tensor3& dt) {
    const std::size_t m = ae.label_dim();
    const std::size_t hd = ae.hidden();
    require_len(dy_out, m, "gae_backward: dy_out");
    require_cache_len(cache.enc_a, m, "enc_a");
    require_cache_len(cache.enc_b, m, "enc_b");
    require_cache_len(cache.dec_y, m, "dec_y");
    require_cache_len(cache.mask_a, m, "mask_a");
    require_cache_len(cache.mask_b, m, "mask_b");
    require_cache_len(cache.mask_d, m, "mask_d");
    require_cache_len(cache.h, hd, "h");
    require_cache_len(cache.y2, m, "y2");
    if (dt.d1() != m || dt.d2() != m || dt.d3() != hd) {
        throw ContractError("gae_backward: gradient tensor shape mismatch");
    }

    Vector dpre2(m);
    for (std::size_t j = 0; j < m; ++j)
        dpre2[j] = dy_out[j] * (1.0 - cache.y2[j] * cache.y2[j]);

    // decode: pre2[j] = sum_{i,k} dec_y[i] t(i,j,k) h[k]
    Vector d_dec(m, 0.0);
    Vector dh(hd, 0.0);
    for (std::size_t k = 0; k < hd; ++k) {
        const double hk = cache.h[k];
        const double* slice = ae.t.slice(k).data();
        double* gslice = dt.slice(k).data();
        double dhk = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double yi = cache.dec_y[i];
            const double* row = slice + i * m;
            double* grow = gslice + i * m;
            double rowdot = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                grow[j] += yi * dpre2[j] * hk;
                rowdot += row[j] * dpre2[j];
            }
            d_dec[i] += rowdot * hk;
            dhk += yi * rowdot;
        }
        dh[k] = dhk;
    }

    // encode: preh[k] = sum_{i,j} enc_a[i] t(i,j,k) enc_b[j]
    Vector dpreh(hd);
    for (std::size_t k = 0; k < hd; ++k) dpreh[k] = dh[k] * (1.0 - cache.h[k] * cache.h[k]);

    Vector d_enc_a(m, 0.0);
    Vector d_enc_b(m, 0.0);
    for (std::size_t k = 0; k < hd; ++k) {
        const double g = dpreh[k];
        const double* slice = ae.t.slice(k).data();
        double* gslice = dt.slice(k).data();
        for (std::size_t i = 0; i < m; ++i) {
            const double ai = cache.enc_a[i];
            const double gai = g * ai;
            const double* row = slice + i * m;
            double* grow = gslice + i * m;
            double rowdot = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                grow[j] += gai * cache.enc_b[j];
                rowdot += row[j] * cache.enc_b[j];
                d_enc_b[j] += gai * row[j];
            }
            d_enc_a[i] += g * rowdot;
        }
    }

    Vector dy1(m);
    for (std::size_t i = 0; i < m; ++i) {
        dy1[i] = cache.mask_d[i] * d_dec[i] + cache.mask_a[i] * d_enc_a[i] +
                 cache.mask_b[i] * d_enc_b[i];
    }
    return dy1;
}

}  // namespace hnnso
