// SPDX-License-Identifier: Apache-2.0
#include "kptrack/tube_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "kptrack/similarity.hpp"

namespace kptrack::tube {

namespace {

std::size_t product(const std::vector<std::size_t>& shape)
{
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

} // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill) : shape_(std::move(shape)), data_(product(shape_), fill)
{
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data))
{
    if (data_.size() != product(shape_))
        throw ValidationError("tensor data size does not match its shape");
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> idx) const
{
    if (idx.size() != shape_.size())
        throw ValidationError("tensor index rank mismatch");
    std::size_t off = 0;
    std::size_t axis = 0;
    for (std::size_t i : idx) {
        if (i >= shape_[axis])
            throw ValidationError("tensor index out of range");
        off = off * shape_[axis] + i;
        ++axis;
    }
    return off;
}

std::vector<TubeAnchor> generate_anchors(const AnchorGrid& grid, int image_width, int image_height,
                                         std::size_t clip_length)
{
    if (grid.scales.empty() || grid.aspects.empty())
        throw ValidationError("anchor grid needs at least one scale and one aspect");
    if (!(grid.stride > 0.0))
        throw ValidationError("anchor stride must be positive");
    if (image_width < 0 || image_height < 0)
        throw ValidationError("image size must be non-negative");
    if (clip_length == 0)
        throw ValidationError("clip length must be at least 1");

    const auto cells_x = static_cast<std::size_t>(std::ceil(image_width / grid.stride));
    const auto cells_y = static_cast<std::size_t>(std::ceil(image_height / grid.stride));
    std::vector<TubeAnchor> anchors;
    anchors.reserve(cells_x * cells_y * grid.anchors_per_position());
    for (std::size_t gy = 0; gy < cells_y; ++gy) {
        for (std::size_t gx = 0; gx < cells_x; ++gx) {
            const double cx = (static_cast<double>(gx) + 0.5) * grid.stride;
            const double cy = (static_cast<double>(gy) + 0.5) * grid.stride;
            for (double scale : grid.scales) {
                for (double aspect : grid.aspects) {
                    const double w = scale * std::sqrt(aspect);
                    const double h = scale / std::sqrt(aspect);
                    anchors.push_back(
                        TubeAnchor{Box{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h}, clip_length});
                }
            }
        }
    }
    return anchors;
}

TubeDeltas encode_tube_deltas(const Tube& target, const TubeAnchor& anchor)
{
    if (target.length() != anchor.length)
        throw ValidationError("tube length does not match anchor length");
    const Box& a = anchor.base;
    if (!(a.width() > 0.0) || !(a.height() > 0.0))
        throw ValidationError("anchor must have positive width and height");

    TubeDeltas deltas;
    deltas.values.reserve(4 * target.length());
    for (const Box& b : target.boxes) {
        if (!(b.width() > 0.0) || !(b.height() > 0.0))
            throw ValidationError("target box must have positive width and height");
        deltas.values.push_back((b.center_x() - a.center_x()) / a.width());
        deltas.values.push_back((b.center_y() - a.center_y()) / a.height());
        deltas.values.push_back(std::log(b.width() / a.width()));
        deltas.values.push_back(std::log(b.height() / a.height()));
    }
    return deltas;
}

Tube decode_tube_deltas(const TubeDeltas& deltas, const TubeAnchor& anchor)
{
    if (deltas.values.size() != 4 * anchor.length)
        throw ValidationError("delta vector has " + std::to_string(deltas.values.size()) + " values, expected " +
                              std::to_string(4 * anchor.length));
    const Box& a = anchor.base;
    Tube tube;
    tube.boxes.reserve(anchor.length);
    for (std::size_t t = 0; t < anchor.length; ++t) {
        const double* d = deltas.values.data() + 4 * t;
        const double cx = a.center_x() + d[0] * a.width();
        const double cy = a.center_y() + d[1] * a.height();
        const double w = a.width() * std::exp(d[2]);
        const double h = a.height() * std::exp(d[3]);
        tube.boxes.push_back(Box{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h});
    }
    return tube;
}

double tube_overlap(const Tube& a, const Tube& b)
{
    if (a.length() != b.length())
        throw ValidationError("tube length mismatch");
    if (a.length() == 0)
        return 0.0;
    double sum = 0.0;
    for (std::size_t t = 0; t < a.length(); ++t)
        sum += iou(a.boxes[t], b.boxes[t]);
    return sum / static_cast<double>(a.length());
}

std::vector<AnchorLabel> assign_anchors(std::span<const TubeAnchor> anchors, std::span<const Tube> gt_tubes,
                                        double fg_thresh, double bg_thresh)
{
    if (!(0.0 <= bg_thresh && bg_thresh < fg_thresh && fg_thresh <= 1.0))
        throw ValidationError("anchor thresholds must satisfy 0 <= bg < fg <= 1");

    std::vector<AnchorLabel> labels(anchors.size());
    std::vector<std::vector<double>> overlaps(anchors.size(), std::vector<double>(gt_tubes.size(), 0.0));
    std::vector<double> best_for_gt(gt_tubes.size(), 0.0);

    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const Tube anchor_tube = anchors[i].as_tube();
        for (std::size_t g = 0; g < gt_tubes.size(); ++g) {
            const double o = tube_overlap(anchor_tube, gt_tubes[g]);
            overlaps[i][g] = o;
            best_for_gt[g] = std::max(best_for_gt[g], o);
        }
        AnchorLabel& label = labels[i];
        for (std::size_t g = 0; g < gt_tubes.size(); ++g)
            if (overlaps[i][g] > label.overlap || g == 0) {
                label.overlap = overlaps[i][g];
                label.gt_index = g;
            }
        if (gt_tubes.empty() || label.overlap <= bg_thresh)
            label.kind = AnchorLabelKind::background;
        else if (label.overlap >= fg_thresh)
            label.kind = AnchorLabelKind::foreground;
        else
            label.kind = AnchorLabelKind::ignore;
    }

    for (std::size_t g = 0; g < gt_tubes.size(); ++g) {
        if (!(best_for_gt[g] > 0.0))
            continue;
        for (std::size_t i = 0; i < anchors.size(); ++i) {
            if (overlaps[i][g] != best_for_gt[g] || labels[i].kind == AnchorLabelKind::foreground)
                continue;
            labels[i] = AnchorLabel{AnchorLabelKind::foreground, g, overlaps[i][g]};
        }
    }
    return labels;
}

double smooth_l1(double x) noexcept
{
    const double ax = std::abs(x);
    return ax < 1.0 ? 0.5 * x * x : ax - 0.5;
}

TrackingLoss tracking_loss(std::span<const TubeDeltas> pred_deltas, std::span<const TubeDeltas> target_deltas,
                           std::span<const std::array<double, 2>> cls_logits,
                           std::span<const AnchorLabel> cls_labels, std::size_t clip_length)
{
    const std::size_t n = cls_labels.size();
    if (clip_length == 0)
        throw ValidationError("clip length must be at least 1");
    if (pred_deltas.size() != n || target_deltas.size() != n || cls_logits.size() != n)
        throw ValidationError("tracking loss inputs disagree on the anchor count");

    TrackingLoss loss;
    std::size_t scored = 0;
    std::size_t foreground = 0;
    double reg_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const AnchorLabel& label = cls_labels[i];
        if (label.kind == AnchorLabelKind::ignore)
            continue;
        const auto& logits = cls_logits[i];
        const double m = std::max(logits[0], logits[1]);
        const double log_norm = m + std::log(std::exp(logits[0] - m) + std::exp(logits[1] - m));
        const std::size_t cls = label.kind == AnchorLabelKind::foreground ? 1 : 0;
        loss.cls += log_norm - logits[cls];
        ++scored;

        if (label.kind != AnchorLabelKind::foreground)
            continue;
        const auto& p = pred_deltas[i].values;
        const auto& t = target_deltas[i].values;
        if (p.size() != 4 * clip_length || t.size() != 4 * clip_length)
            throw ValidationError("delta vector length does not match 4T");
        for (std::size_t k = 0; k < p.size(); ++k)
            reg_sum += smooth_l1(p[k] - t[k]);
        ++foreground;
    }
    if (scored)
        loss.cls /= static_cast<double>(scored);
    if (foreground)
        loss.reg = reg_sum / static_cast<double>(foreground) / static_cast<double>(clip_length);
    return loss;
}

double bilinear_sample(std::span<const double> plane, std::size_t height, std::size_t width, double y, double x)
{
    const auto h = static_cast<double>(height);
    const auto w = static_cast<double>(width);
    if (height == 0 || width == 0 || y < -1.0 || y > h || x < -1.0 || x > w)
        return 0.0;
    y = std::max(y, 0.0);
    x = std::max(x, 0.0);

    auto y_lo = static_cast<std::size_t>(y);
    auto x_lo = static_cast<std::size_t>(x);
    std::size_t y_hi, x_hi;
    if (y_lo >= height - 1) {
        y_lo = y_hi = height - 1;
        y = static_cast<double>(y_lo);
    } else {
        y_hi = y_lo + 1;
    }
    if (x_lo >= width - 1) {
        x_lo = x_hi = width - 1;
        x = static_cast<double>(x_lo);
    } else {
        x_hi = x_lo + 1;
    }

    const double ly = y - static_cast<double>(y_lo);
    const double lx = x - static_cast<double>(x_lo);
    const double hy = 1.0 - ly;
    const double hx = 1.0 - lx;
    return hy * hx * plane[y_lo * width + x_lo] + hy * lx * plane[y_lo * width + x_hi] +
           ly * hx * plane[y_hi * width + x_lo] + ly * lx * plane[y_hi * width + x_hi];
}

Tensor spatiotemporal_roi_align(const FeatureVolume& volume, const Tube& tube, std::size_t output_size,
                                std::size_t samples_per_bin)
{
    if (output_size == 0)
        throw ValidationError("RoIAlign output size must be positive");
    if (samples_per_bin == 0)
        throw ValidationError("RoIAlign needs at least one sample per bin");
    if (volume.data.rank() != 4)
        throw ValidationError("feature volume must be T x C x H x W");
    if (!(volume.stride > 0.0))
        throw ValidationError("feature stride must be positive");
    const std::size_t frames = volume.data.dim(0);
    const std::size_t channels = volume.data.dim(1);
    const std::size_t height = volume.data.dim(2);
    const std::size_t width = volume.data.dim(3);
    if (tube.length() != frames)
        throw ValidationError("tube length does not match the feature volume's temporal extent");

    const std::size_t r = output_size;
    Tensor out({frames, channels, r, r});
    const auto in = volume.data.data();
    auto dst = out.data();
    const double scale = 1.0 / volume.stride;
    const double inv_samples = 1.0 / static_cast<double>(samples_per_bin * samples_per_bin);

    for (std::size_t t = 0; t < frames; ++t) {
        const Box& box = tube.boxes[t];
        // Pixel centers sit at half-integer feature coordinates.
        const double x0 = box.x_min * scale - 0.5;
        const double y0 = box.y_min * scale - 0.5;
        const double bin_w = (box.x_max - box.x_min) * scale / static_cast<double>(r);
        const double bin_h = (box.y_max - box.y_min) * scale / static_cast<double>(r);

        for (std::size_t c = 0; c < channels; ++c) {
            const auto plane = in.subspan((t * channels + c) * height * width, height * width);
            for (std::size_t py = 0; py < r; ++py) {
                for (std::size_t px = 0; px < r; ++px) {
                    double acc = 0.0;
                    for (std::size_t iy = 0; iy < samples_per_bin; ++iy) {
                        const double y = y0 + static_cast<double>(py) * bin_h +
                                         (static_cast<double>(iy) + 0.5) * bin_h / static_cast<double>(samples_per_bin);
                        for (std::size_t ix = 0; ix < samples_per_bin; ++ix) {
                            const double x = x0 + static_cast<double>(px) * bin_w +
                                             (static_cast<double>(ix) + 0.5) * bin_w /
                                                 static_cast<double>(samples_per_bin);
                            acc += bilinear_sample(plane, height, width, y, x);
                        }
                    }
                    dst[((t * channels + c) * r + py) * r + px] = acc * inv_samples;
                }
            }
        }
    }
    return out;
}

Pose decode_keypoint_heatmap(const Tensor& heatmap, const Box& box)
{
    if (heatmap.rank() != 3 || heatmap.dim(1) != heatmap.dim(2) || heatmap.dim(1) == 0)
        throw ValidationError("heatmap must be J x R x R with R >= 1");
    const std::size_t joints = heatmap.dim(0);
    const std::size_t res = heatmap.dim(1);
    const std::size_t bins = res * res;
    const auto data = heatmap.data();
    for (double v : data)
        if (!std::isfinite(v))
            throw ValidationError("heatmap has a non-finite value");

    const double bin_w = box.width() / static_cast<double>(res);
    const double bin_h = box.height() / static_cast<double>(res);
    Pose pose(joints);
    for (std::size_t j = 0; j < joints; ++j) {
        const auto map = data.subspan(j * bins, bins);
        const std::size_t best = static_cast<std::size_t>(std::max_element(map.begin(), map.end()) - map.begin());
        const double peak = map[best];
        double norm = 0.0;
        for (double v : map)
            norm += std::exp(v - peak);
        const std::size_t row = best / res;
        const std::size_t col = best % res;
        pose[j] = Keypoint{box.x_min + (static_cast<double>(col) + 0.5) * bin_w,
                           box.y_min + (static_cast<double>(row) + 0.5) * bin_h, 1.0 / norm, true};
    }
    return pose;
}

InflationMode parse_inflation_mode(std::string_view name)
{
    if (name == "center")
        return InflationMode::center;
    if (name == "mean")
        return InflationMode::mean;
    throw ValidationError("unknown inflation mode \"" + std::string(name) + "\"");
}

Tensor inflate_2d_filter(const Tensor& weights2d, std::size_t temporal_size, InflationMode mode)
{
    if (weights2d.rank() != 4)
        throw ValidationError("2D filter bank must be C_out x C_in x K x K");
    if (temporal_size == 0)
        throw ValidationError("temporal kernel size must be at least 1");
    if (mode == InflationMode::center && temporal_size % 2 == 0)
        throw ValidationError("center inflation needs an odd temporal kernel size");

    const std::size_t c_out = weights2d.dim(0);
    const std::size_t c_in = weights2d.dim(1);
    const std::size_t kh = weights2d.dim(2);
    const std::size_t kw = weights2d.dim(3);
    const std::size_t slice = kh * kw;
    Tensor out({c_out, c_in, temporal_size, kh, kw});
    const auto src = weights2d.data();
    auto dst = out.data();

    for (std::size_t o = 0; o < c_out; ++o) {
        for (std::size_t i = 0; i < c_in; ++i) {
            const auto w = src.subspan((o * c_in + i) * slice, slice);
            for (std::size_t t = 0; t < temporal_size; ++t) {
                auto d = dst.subspan(((o * c_in + i) * temporal_size + t) * slice, slice);
                if (mode == InflationMode::mean) {
                    for (std::size_t k = 0; k < slice; ++k)
                        d[k] = w[k] / static_cast<double>(temporal_size);
                } else if (t == temporal_size / 2) {
                    std::copy(w.begin(), w.end(), d.begin());
                }
            }
        }
    }
    return out;
}

} // namespace kptrack::tube
