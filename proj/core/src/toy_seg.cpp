// Copyright 2026 The Heteraug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "heteraug/toy_seg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "heteraug/image_io.hpp"
#include "heteraug/metrics.hpp"
#include "heteraug/parallel.hpp"

namespace heteraug {

namespace {

constexpr float kBackgroundBase[3] = {0.45f, 0.42f, 0.38f};
// per-class shape colors: circle reddish, rectangle greenish, triangle
// bluish. Deliberately muted and close to the background so corruptions
// genuinely threaten class identity at desk scale.
constexpr float kClassColors[3][3] = {
    {0.68f, 0.32f, 0.29f},
    {0.31f, 0.58f, 0.33f},
    {0.32f, 0.38f, 0.66f},
};
// Per-class fill pattern modulation: circles plain, rectangles striped,
// triangles checkered. Gives every class a corruption-stable texture cue
// alongside color.
constexpr float kPatternDepth = 0.12f;

float pattern_offset(int shape, int y, int x) {
  if (shape == 1) return (y / 2) % 2 == 0 ? kPatternDepth : -kPatternDepth;
  if (shape == 2) return ((y + x) % 2 == 0) ? kPatternDepth : -kPatternDepth;
  return 0.0f;
}

float clampf(float v) { return std::clamp(v, 0.0f, 1.0f); }

struct Vec2 {
  double x, y;
};

double edge_sign(const Vec2& a, const Vec2& b, double px, double py) {
  return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

}  // namespace

std::pair<Image, LabelMap> gen_scene(const SceneSpec& spec, RngStream& rng) {
  const int h = spec.height, w = spec.width;
  Image img = Image::zeros(h, w);
  LabelMap label = LabelMap::filled(h, w, 0);

  // textured background: jittered base color plus shared per-pixel noise
  float base[3];
  for (int c = 0; c < 3; ++c)
    base[c] = clampf(kBackgroundBase[c] + float(rng.uniform(-0.05, 0.05)));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float t = float(spec.texture_amplitude * rng.uniform(-1.0, 1.0));
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = clampf(base[c] + t);
    }
  }

  const int count =
      spec.min_shapes + int(rng.uniform_int(uint64_t(spec.max_shapes - spec.min_shapes + 1)));
  for (int n = 0; n < count; ++n) {
    const int shape = int(rng.uniform_int(3));  // 0 circle, 1 rectangle, 2 triangle
    const uint16_t cls = uint16_t(shape + 1);

    float color[3];
    for (int c = 0; c < 3; ++c)
      color[c] = clampf(kClassColors[shape][c] +
                        float(rng.uniform(-spec.color_jitter, spec.color_jitter)));

    auto paint = [&](int y, int x) {
      const float offset = pattern_offset(shape, y, x);
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = clampf(color[c] + offset);
      label.at(y, x) = cls;
    };

    if (shape == 0) {
      const double r = rng.uniform(double(spec.min_size), 15.0);
      const double cx = rng.uniform(r, w - 1 - r);
      const double cy = rng.uniform(r, h - 1 - r);
      for (int y = std::max(0, int(cy - r)); y <= std::min(h - 1, int(cy + r + 1)); ++y)
        for (int x = std::max(0, int(cx - r)); x <= std::min(w - 1, int(cx + r + 1)); ++x)
          if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) paint(y, x);
    } else if (shape == 1) {
      const double hx = rng.uniform(double(spec.min_size), 14.0);
      const double hy = rng.uniform(double(spec.min_size), 14.0);
      const double cx = rng.uniform(hx, w - 1 - hx);
      const double cy = rng.uniform(hy, h - 1 - hy);
      for (int y = std::max(0, int(cy - hy)); y <= std::min(h - 1, int(cy + hy + 1)); ++y)
        for (int x = std::max(0, int(cx - hx)); x <= std::min(w - 1, int(cx + hx + 1)); ++x)
          if (std::fabs(x - cx) <= hx && std::fabs(y - cy) <= hy) paint(y, x);
    } else {
      const double rad = rng.uniform(double(spec.min_size) + 2.0, 18.0);
      const double cx = rng.uniform(rad, w - 1 - rad);
      const double cy = rng.uniform(rad, h - 1 - rad);
      const double a0 = rng.uniform(0.0, 2.0 * M_PI);
      Vec2 v[3];
      for (int i = 0; i < 3; ++i) {
        const double angle = a0 + i * 2.0 * M_PI / 3.0;
        const double vr = rad * rng.uniform(0.8, 1.2);
        v[i] = {cx + vr * std::cos(angle), cy + vr * std::sin(angle)};
      }
      const int y0 = std::max(0, int(std::floor(std::min({v[0].y, v[1].y, v[2].y}))));
      const int y1 = std::min(h - 1, int(std::ceil(std::max({v[0].y, v[1].y, v[2].y}))));
      const int x0 = std::max(0, int(std::floor(std::min({v[0].x, v[1].x, v[2].x}))));
      const int x1 = std::min(w - 1, int(std::ceil(std::max({v[0].x, v[1].x, v[2].x}))));
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double s0 = edge_sign(v[0], v[1], x, y);
          const double s1 = edge_sign(v[1], v[2], x, y);
          const double s2 = edge_sign(v[2], v[0], x, y);
          const bool has_neg = s0 < 0 || s1 < 0 || s2 < 0;
          const bool has_pos = s0 > 0 || s1 > 0 || s2 > 0;
          if (!(has_neg && has_pos)) paint(y, x);
        }
      }
    }
  }
  return {std::move(img), std::move(label)};
}

Dataset gen_dataset(const SceneSpec& spec, int count, uint64_t seed,
                    const std::string& name) {
  Dataset ds;
  ds.name = name;
  ds.num_classes = spec.num_classes;
  ds.class_names = {"background", "circle", "rectangle", "triangle"};
  char id[32];
  for (int i = 0; i < count; ++i) {
    std::snprintf(id, sizeof id, "scene_%04d", i);
    RngStream rng = derive_rng(seed, {"scene", uint64_t(i)});
    auto [img, label] = gen_scene(spec, rng);
    ds.ids.emplace_back(id);
    ds.images.push_back(std::move(img));
    ds.labels.push_back(std::move(label));
  }
  return ds;
}

// ---- tiny segmenter ----

namespace {

// zero-padded 3x3 conv: out(o,y,x) = b[o] + sum_i sum_k w[(o*in+i)*9+k] in(i,...)
void conv3x3_zero(const Tensor& src, const std::vector<float>& w,
                  const std::vector<float>& b, Tensor& dst) {
  const int h = src.height, width = src.width;
  const int in_ch = src.channels, out_ch = dst.channels;
  for (int o = 0; o < out_ch; ++o) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < width; ++x) {
        float acc = b[o];
        for (int i = 0; i < in_ch; ++i) {
          const float* wk = &w[(size_t(o) * in_ch + i) * 9];
          const float* plane = &src.data[size_t(i) * h * width];
          for (int ky = 0; ky < 3; ++ky) {
            const int sy = y + ky - 1;
            if (sy < 0 || sy >= h) continue;
            const float* row = plane + size_t(sy) * width;
            for (int kx = 0; kx < 3; ++kx) {
              const int sx = x + kx - 1;
              if (sx < 0 || sx >= width) continue;
              acc += wk[ky * 3 + kx] * row[sx];
            }
          }
        }
        dst.at(y, x, o) = acc;
      }
    }
  }
}

// gradient of conv3x3_zero wrt weights, bias and input
void conv3x3_zero_backward(const Tensor& src, const std::vector<float>& w,
                           const Tensor& dout, std::vector<float>& dw,
                           std::vector<float>& db, Tensor* dsrc) {
  const int h = src.height, width = src.width;
  const int in_ch = src.channels, out_ch = dout.channels;
  for (int o = 0; o < out_ch; ++o) {
    const float* dplane = &dout.data[size_t(o) * h * width];
    for (size_t p = 0; p < size_t(h) * width; ++p) db[o] += dplane[p];
    for (int i = 0; i < in_ch; ++i) {
      float* dwk = &dw[(size_t(o) * in_ch + i) * 9];
      const float* wk = &w[(size_t(o) * in_ch + i) * 9];
      const float* plane = &src.data[size_t(i) * h * width];
      float* dsplane = dsrc ? &dsrc->data[size_t(i) * h * width] : nullptr;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < width; ++x) {
          const float g = dplane[size_t(y) * width + x];
          if (g == 0.0f) continue;
          for (int ky = 0; ky < 3; ++ky) {
            const int sy = y + ky - 1;
            if (sy < 0 || sy >= h) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int sx = x + kx - 1;
              if (sx < 0 || sx >= width) continue;
              dwk[ky * 3 + kx] += g * plane[size_t(sy) * width + sx];
              if (dsplane) dsplane[size_t(sy) * width + sx] += g * wk[ky * 3 + kx];
            }
          }
        }
      }
    }
  }
}

Tensor image_to_tensor(const Image& img) {
  Tensor t = Tensor::zeros(img.height, img.width, 3);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) t.at(y, x, c) = img.at(y, x, c);
  return t;
}

struct ForwardState {
  Tensor input, z1, a1, z2, a2, z3, probs;
};

void toy_forward_full(const ToyNet& net, const Image& img, ForwardState& st) {
  const int h = img.height, w = img.width;
  st.input = image_to_tensor(img);
  st.z1 = Tensor::zeros(h, w, net.hidden);
  conv3x3_zero(st.input, net.w1, net.b1, st.z1);
  st.a1 = st.z1;
  for (float& v : st.a1.data) v = std::max(0.0f, v);

  st.z2 = Tensor::zeros(h, w, net.hidden);
  conv3x3_zero(st.a1, net.w2, net.b2, st.z2);
  st.a2 = st.z2;
  for (float& v : st.a2.data) v = std::max(0.0f, v);

  // 1x1 head
  st.z3 = Tensor::zeros(h, w, net.num_classes);
  const size_t plane = size_t(h) * w;
  for (int o = 0; o < net.num_classes; ++o) {
    float* dst = &st.z3.data[plane * o];
    const float* wk = &net.w3[size_t(o) * net.hidden];
    for (size_t p = 0; p < plane; ++p) {
      float acc = net.b3[o];
      for (int i = 0; i < net.hidden; ++i) acc += wk[i] * st.a2.data[plane * i + p];
      dst[p] = acc;
    }
  }

  // per-pixel softmax, max-subtracted
  st.probs = st.z3;
  for (size_t p = 0; p < plane; ++p) {
    float mx = st.z3.data[p];
    for (int k = 1; k < net.num_classes; ++k)
      mx = std::max(mx, st.z3.data[plane * k + p]);
    float sum = 0.0f;
    for (int k = 0; k < net.num_classes; ++k) {
      const float e = std::exp(st.z3.data[plane * k + p] - mx);
      st.probs.data[plane * k + p] = e;
      sum += e;
    }
    for (int k = 0; k < net.num_classes; ++k) st.probs.data[plane * k + p] /= sum;
  }
}

}  // namespace

ToyNet init_toy_net(RngStream& rng, int num_classes, int hidden) {
  ToyNet net;
  net.hidden = hidden;
  net.num_classes = num_classes;
  net.w1.resize(size_t(hidden) * 3 * 9);
  net.b1.assign(hidden, 0.05f);  // small positive bias keeps relus alive early
  net.w2.resize(size_t(hidden) * hidden * 9);
  net.b2.assign(hidden, 0.05f);
  net.w3.resize(size_t(num_classes) * hidden);
  net.b3.assign(num_classes, 0.0f);

  const double s1 = std::sqrt(2.0 / (3.0 * 9.0));
  const double s2 = std::sqrt(2.0 / (double(hidden) * 9.0));
  const double s3 = std::sqrt(1.0 / double(hidden));
  for (float& v : net.w1) v = float(s1 * rng.normal());
  for (float& v : net.w2) v = float(s2 * rng.normal());
  for (float& v : net.w3) v = float(s3 * rng.normal());
  return net;
}

Tensor toy_forward(const ToyNet& net, const Image& img) {
  ForwardState st;
  toy_forward_full(net, img, st);
  return std::move(st.probs);
}

LabelMap toy_predict(const ToyNet& net, const Image& img) {
  const Tensor probs = toy_forward(net, img);
  LabelMap out = LabelMap::filled(img.height, img.width, 0);
  const size_t plane = size_t(img.height) * img.width;
  for (size_t p = 0; p < plane; ++p) {
    int best = 0;
    float best_v = probs.data[p];
    for (int k = 1; k < net.num_classes; ++k) {
      const float v = probs.data[plane * k + p];
      if (v > best_v) {
        best_v = v;
        best = k;
      }
    }
    out.data[p] = uint16_t(best);
  }
  return out;
}

ToyGradients ToyGradients::zeros_like(const ToyNet& net) {
  ToyGradients g;
  g.w1.assign(net.w1.size(), 0.0f);
  g.b1.assign(net.b1.size(), 0.0f);
  g.w2.assign(net.w2.size(), 0.0f);
  g.b2.assign(net.b2.size(), 0.0f);
  g.w3.assign(net.w3.size(), 0.0f);
  g.b3.assign(net.b3.size(), 0.0f);
  return g;
}

void ToyGradients::add(const ToyGradients& other) {
  auto acc = [](std::vector<float>& a, const std::vector<float>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  };
  acc(w1, other.w1);
  acc(b1, other.b1);
  acc(w2, other.w2);
  acc(b2, other.b2);
  acc(w3, other.w3);
  acc(b3, other.b3);
}

void ToyGradients::scale(double factor) {
  const float f = float(factor);
  for (auto* v : {&w1, &b1, &w2, &b2, &w3, &b3})
    for (float& x : *v) x *= f;
}

double loss_and_grad(const ToyNet& net, const Image& img, const LabelMap& gt,
                     ToyGradients& grad) {
  if (img.height != gt.height || img.width != gt.width)
    throw std::invalid_argument("loss_and_grad: image/label dimension mismatch");

  ForwardState st;
  toy_forward_full(net, img, st);
  const int h = img.height, w = img.width;
  const size_t plane = size_t(h) * w;
  const double inv_n = 1.0 / double(plane);

  double loss = 0.0;
  Tensor dz3 = Tensor::zeros(h, w, net.num_classes);
  for (size_t p = 0; p < plane; ++p) {
    const int y = gt.data[p];
    if (y >= net.num_classes) throw std::out_of_range("loss_and_grad: label id out of range");
    const float py = st.probs.data[plane * y + p];
    loss -= std::log(std::max(py, 1e-30f));
    for (int k = 0; k < net.num_classes; ++k) {
      const float indicator = k == y ? 1.0f : 0.0f;
      dz3.data[plane * k + p] = float((st.probs.data[plane * k + p] - indicator) * inv_n);
    }
  }
  loss *= inv_n;

  // head (1x1): dw3[o][i] = sum_p dz3[o] a2[i]; da2 = w3^T dz3
  Tensor da2 = Tensor::zeros(h, w, net.hidden);
  for (int o = 0; o < net.num_classes; ++o) {
    const float* dzp = &dz3.data[plane * o];
    float sum = 0.0f;
    for (size_t p = 0; p < plane; ++p) sum += dzp[p];
    grad.b3[o] += sum;
    for (int i = 0; i < net.hidden; ++i) {
      const float* a2p = &st.a2.data[plane * i];
      float* da2p = &da2.data[plane * i];
      const float wv = net.w3[size_t(o) * net.hidden + i];
      float dw = 0.0f;
      for (size_t p = 0; p < plane; ++p) {
        dw += dzp[p] * a2p[p];
        da2p[p] += wv * dzp[p];
      }
      grad.w3[size_t(o) * net.hidden + i] += dw;
    }
  }

  // relu backprop then conv2
  Tensor dz2 = da2;
  for (size_t i = 0; i < dz2.data.size(); ++i)
    if (st.z2.data[i] <= 0.0f) dz2.data[i] = 0.0f;
  Tensor da1 = Tensor::zeros(h, w, net.hidden);
  conv3x3_zero_backward(st.a1, net.w2, dz2, grad.w2, grad.b2, &da1);

  Tensor dz1 = da1;
  for (size_t i = 0; i < dz1.data.size(); ++i)
    if (st.z1.data[i] <= 0.0f) dz1.data[i] = 0.0f;
  conv3x3_zero_backward(st.input, net.w1, dz1, grad.w1, grad.b1, nullptr);

  return loss;
}

GeoParams sample_geo(RngStream& rng) {
  GeoParams geo;
  geo.flip = rng.uniform() < 0.5;
  geo.scale = rng.uniform(0.75, 1.25);
  return geo;
}

namespace {

// output pixel -> source position shared by both overloads
void geo_source(const GeoParams& geo, int h, int w, int y, int x, double& sy, double& sx) {
  const double cy = (h - 1) / 2.0;
  const double cx = (w - 1) / 2.0;
  sy = cy + (y - cy) / geo.scale;
  sx = cx + (x - cx) / geo.scale;
  if (geo.flip) sx = (w - 1) - sx;
}

}  // namespace

Image apply_geo(const Image& img, const GeoParams& geo) {
  Image out = Image::zeros(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double sy, sx;
      geo_source(geo, img.height, img.width, y, x, sy, sx);
      sy = std::clamp(sy, 0.0, double(img.height - 1));
      sx = std::clamp(sx, 0.0, double(img.width - 1));
      const int y0 = int(sy), x0 = int(sx);
      const int y1 = std::min(y0 + 1, img.height - 1);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const float fy = float(sy - y0), fx = float(sx - x0);
      for (int c = 0; c < 3; ++c) {
        const float top = img.at(y0, x0, c) * (1 - fx) + img.at(y0, x1, c) * fx;
        const float bot = img.at(y1, x0, c) * (1 - fx) + img.at(y1, x1, c) * fx;
        out.at(y, x, c) = top * (1 - fy) + bot * fy;
      }
    }
  }
  return out;
}

LabelMap apply_geo(const LabelMap& map, const GeoParams& geo) {
  LabelMap out = LabelMap::filled(map.height, map.width, 0);
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      double sy, sx;
      geo_source(geo, map.height, map.width, y, x, sy, sx);
      const int ny = std::clamp(int(std::lround(sy)), 0, map.height - 1);
      const int nx = std::clamp(int(std::lround(sx)), 0, map.width - 1);
      out.at(y, x) = map.at(ny, nx);
    }
  }
  return out;
}

ToyNet train(AugMode mode, const Dataset& trainset, uint64_t seed,
             const TrainOptions& options) {
  TrainingStream stream(trainset, options.heter, mode, seed, options.batch_size);
  RngStream init_rng = derive_rng(seed, {"init"});
  ToyNet net = init_toy_net(init_rng, trainset.num_classes, options.hidden);

  ToyGradients velocity = ToyGradients::zeros_like(net);
  const size_t batches_per_epoch = stream.batches_per_epoch();
  const int drop_epoch = std::max(1, int(std::ceil(options.epochs * options.lr_drop_fraction)));

  uint64_t global_batch = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const double base_lr = epoch < drop_epoch ? options.lr : options.lr * 0.1;
    for (size_t b = 0; b < batches_per_epoch; ++b, ++global_batch) {
      // linear warmup across the first epoch; hot momentum steps on a
      // fresh net are what kill relu units and collapse training
      const double lr =
          options.warmup && epoch == 0
              ? base_lr * double(b + 1) / double(batches_per_epoch)
              : base_lr;
      TrainingStream::Batch batch = stream.next();
      const size_t n = batch.images.size();

      if (options.geometric_aug) {
        for (size_t k = 0; k < n; ++k) {
          RngStream geo_rng = derive_rng(seed, {"geo", global_batch, uint64_t(k)});
          const GeoParams geo = sample_geo(geo_rng);
          batch.images[k] = apply_geo(batch.images[k], geo);
          batch.labels[k] = apply_geo(batch.labels[k], geo);
        }
      }

      std::vector<ToyGradients> grads(n, ToyGradients::zeros_like(net));
      std::vector<double> losses(n, 0.0);
      parallel_for(n, options.threads, [&](size_t k) {
        losses[k] = loss_and_grad(net, batch.images[k], batch.labels[k], grads[k]);
      });

      double batch_loss = 0.0;
      ToyGradients total = ToyGradients::zeros_like(net);
      for (size_t k = 0; k < n; ++k) {  // fixed merge order
        batch_loss += losses[k];
        total.add(grads[k]);
      }
      batch_loss /= double(n);
      total.scale(1.0 / double(n));

      if (!std::isfinite(batch_loss))
        throw std::runtime_error("training diverged: non-finite loss at batch " +
                                 std::to_string(global_batch));

      if (options.grad_clip > 0.0) {
        double norm_sq = 0.0;
        for (const auto* g : {&total.w1, &total.b1, &total.w2, &total.b2, &total.w3,
                              &total.b3})
          for (float x : *g) norm_sq += double(x) * x;
        const double norm = std::sqrt(norm_sq);
        if (norm > options.grad_clip) total.scale(options.grad_clip / norm);
      }

      auto update = [&](std::vector<float>& w, std::vector<float>& v,
                        const std::vector<float>& g) {
        for (size_t i = 0; i < w.size(); ++i) {
          v[i] = float(options.momentum) * v[i] - float(lr) * g[i];
          w[i] += v[i];
        }
      };
      update(net.w1, velocity.w1, total.w1);
      update(net.b1, velocity.b1, total.b1);
      update(net.w2, velocity.w2, total.w2);
      update(net.b2, velocity.b2, total.b2);
      update(net.w3, velocity.w3, total.w3);
      update(net.b3, velocity.b3, total.b3);
    }
  }
  return net;
}

double clean_miou(const ToyNet& net, const Dataset& dataset) {
  ConfusionMatrix cm(dataset.num_classes);
  for (size_t i = 0; i < dataset.size(); ++i)
    accumulate(cm, toy_predict(net, dataset.images[i]), dataset.labels[i]);
  return miou(cm);
}

void save_checkpoint(const ToyNet& net, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["hidden"] = net.hidden;
  j["num_classes"] = net.num_classes;
  auto layer = [](const std::vector<float>& w, std::vector<int> shape) {
    nlohmann::ordered_json l;
    l["shape"] = shape;
    l["data"] = w;
    return l;
  };
  j["layers"]["w1"] = layer(net.w1, {net.hidden, 3, 3, 3});
  j["layers"]["b1"] = layer(net.b1, {net.hidden});
  j["layers"]["w2"] = layer(net.w2, {net.hidden, net.hidden, 3, 3});
  j["layers"]["b2"] = layer(net.b2, {net.hidden});
  j["layers"]["w3"] = layer(net.w3, {net.num_classes, net.hidden});
  j["layers"]["b3"] = layer(net.b3, {net.num_classes});
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
  out << j.dump(2) << "\n";
}

ToyNet load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(in);
  if (j.at("format_version").get<int>() != 1)
    throw std::runtime_error("unsupported checkpoint version in " + path.string());
  ToyNet net;
  net.hidden = j.at("hidden").get<int>();
  net.num_classes = j.at("num_classes").get<int>();
  auto read = [&](const char* name) {
    return j.at("layers").at(name).at("data").get<std::vector<float>>();
  };
  net.w1 = read("w1");
  net.b1 = read("b1");
  net.w2 = read("w2");
  net.b2 = read("b2");
  net.w3 = read("w3");
  net.b3 = read("b3");
  return net;
}

Report robustness_eval(const ToyNet& net, const Manifest& benchmark, int threads) {
  return evaluate_with_predictor(
      benchmark, [&](const Image& img) { return toy_predict(net, img); },
      /*include_clean=*/true, threads);
}

}  // namespace heteraug
