// SPDX-License-Identifier: Apache-2.0
#pragma once

/// \file tube_geometry.hpp
/// \brief Numeric kernels of the clip-level (tube) detector: tube anchors,
/// anchor-relative delta coding, anchor labeling, the tracking loss,
/// spatiotemporal RoIAlign, heatmap decoding and 2D->3D filter inflation.
///
/// These are pure functions over small dense tensors; no network is trained
/// or evaluated here.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kptrack/core_model.hpp"

namespace kptrack::tube {

/// Dense row-major N-d array of doubles.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return data_.size(); }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    double& operator()(std::initializer_list<std::size_t> idx) { return data_[offset(idx)]; }
    double operator()(std::initializer_list<std::size_t> idx) const { return data_[offset(idx)]; }

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    std::size_t offset(std::initializer_list<std::size_t> idx) const;

    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

/// T boxes, one per clip frame.
struct Tube {
    std::vector<Box> boxes;

    std::size_t length() const noexcept { return boxes.size(); }
    friend bool operator==(const Tube&, const Tube&) = default;
};

/// One reference box replicated over all T frames of the clip.
struct TubeAnchor {
    Box base;
    std::size_t length = 3;

    Tube as_tube() const { return Tube{std::vector<Box>(length, base)}; }
};

/// 4T values, frame-major: (tx, ty, tw, th) of frame 0 first.
struct TubeDeltas {
    std::vector<double> values;

    std::size_t length() const noexcept { return values.size() / 4; }
};

struct AnchorGrid {
    std::vector<double> scales{32.0, 64.0, 128.0, 256.0};
    std::vector<double> aspects{0.5, 1.0, 2.0};
    double stride = 8.0;

    std::size_t anchors_per_position() const noexcept { return scales.size() * aspects.size(); }
};

/// A anchors per cell of a ceil(H/stride) x ceil(W/stride) grid, centered on
/// the cell center, with area scale^2 and width/height = aspect. Order: grid
/// rows, grid columns, scales, aspects.
std::vector<TubeAnchor> generate_anchors(const AnchorGrid& grid, int image_width, int image_height,
                                         std::size_t clip_length);

TubeDeltas encode_tube_deltas(const Tube& target, const TubeAnchor& anchor);
Tube decode_tube_deltas(const TubeDeltas& deltas, const TubeAnchor& anchor);

/// Mean over frames of the per-frame box IoU.
double tube_overlap(const Tube& a, const Tube& b);

enum class AnchorLabelKind { foreground, background, ignore };

struct AnchorLabel {
    AnchorLabelKind kind = AnchorLabelKind::ignore;
    /// Matched ground-truth tube (foreground only).
    std::size_t gt_index = 0;
    double overlap = 0.0;
};

/// Overlap >= fg_thresh -> foreground, <= bg_thresh -> background, otherwise
/// ignored. The best-overlapping anchor(s) of each GT tube are foreground
/// regardless, provided the overlap is positive.
std::vector<AnchorLabel> assign_anchors(std::span<const TubeAnchor> anchors, std::span<const Tube> gt_tubes,
                                        double fg_thresh = 0.7, double bg_thresh = 0.3);

struct TrackingLoss {
    double cls = 0.0;
    double reg = 0.0;
};

double smooth_l1(double x) noexcept;

/// `cls_logits[i]` holds the (background, foreground) logits of anchor i.
/// cls: mean softmax cross-entropy over non-ignored anchors.
/// reg: smooth-L1 summed over foreground anchors and their 4T coordinates,
/// divided by the foreground count and by T.
TrackingLoss tracking_loss(std::span<const TubeDeltas> pred_deltas, std::span<const TubeDeltas> target_deltas,
                           std::span<const std::array<double, 2>> cls_logits,
                           std::span<const AnchorLabel> cls_labels, std::size_t clip_length);

/// T x C x H x W features at `stride` image pixels per cell.
struct FeatureVolume {
    Tensor data;
    double stride = 8.0;
};

/// Bilinear sample of one H x W plane at continuous (y, x), where integer
/// coordinates are cell centers. Samples beyond one cell outside the plane
/// are zero; samples within that band read the nearest edge.
double bilinear_sample(std::span<const double> plane, std::size_t height, std::size_t width, double y, double x);

/// Per frame t, RoIAlign of tube box t on feature slice t into an R x R
/// grid, averaging samples_per_bin^2 bilinear samples per bin. Output is
/// T x C x R x R.
Tensor spatiotemporal_roi_align(const FeatureVolume& volume, const Tube& tube, std::size_t output_size,
                                std::size_t samples_per_bin = 2);

/// J x R' x R' heatmap -> one keypoint per joint at the argmax bin center
/// (ties: lowest row-major index) mapped into `box`; score is the softmax
/// probability of that bin.
Pose decode_keypoint_heatmap(const Tensor& heatmap, const Box& box);

enum class InflationMode { center, mean };
InflationMode parse_inflation_mode(std::string_view name);

/// C_out x C_in x K x K -> C_out x C_in x K_T x K x K.
Tensor inflate_2d_filter(const Tensor& weights2d, std::size_t temporal_size, InflationMode mode);

} // namespace kptrack::tube
