// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace nfchan {

using Point3 = Eigen::Vector3d;

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double wavelength_from_frequency(double frequency_hz) { return kSpeedOfLight / frequency_hz; }
inline double wavenumber_from_frequency(double frequency_hz) {
    return 2.0 * kPi / wavelength_from_frequency(frequency_hz);
}

// Finite rectangular patch of an oriented plane: origin at the patch center,
// in-plane axes spanning extents (length_u, length_v), unit normal.
class PlaneSpec {
public:
    PlaneSpec(const Point3& origin, const Point3& normal, const Point3& axis_u, const Point3& axis_v,
              double extent_u, double extent_v);

    const Point3& origin() const { return origin_; }
    const Point3& normal() const { return normal_; }
    const Point3& axis_u() const { return axis_u_; }
    const Point3& axis_v() const { return axis_v_; }
    double extent_u() const { return extent_u_; }
    double extent_v() const { return extent_v_; }
    double area() const { return extent_u_ * extent_v_; }

    // Signed height of p above the plane (positive along the normal).
    double signed_distance(const Point3& p) const { return normal_.dot(p - origin_); }

    // Point at in-plane coordinates (u, v), displaced by `height` along the normal.
    Point3 point_at(double u, double v, double height = 0.0) const {
        return origin_ + u * axis_u_ + v * axis_v_ + height * normal_;
    }

private:
    Point3 origin_, normal_, axis_u_, axis_v_;
    double extent_u_, extent_v_;
};

// Immutable antenna array: ordered element positions plus their mean.
class ArrayGeometry {
public:
    explicit ArrayGeometry(std::vector<Point3> elements);

    std::size_t size() const { return elements_.size(); }
    const Point3& element(std::size_t i) const { return elements_[i]; }
    const std::vector<Point3>& elements() const { return elements_; }
    const Point3& center() const { return center_; }

private:
    std::vector<Point3> elements_;
    Point3 center_;
};

// Uniform planar array on a centered rectangular grid, element order
// row-major over (u, v): index = iu * n_v + iv. n_v = 1 gives a ULA.
ArrayGeometry make_upa(const Point3& center, int n_u, int n_v, double spacing, const Point3& axis_u,
                       const Point3& axis_v);

ArrayGeometry make_ula(const Point3& center, int n, double spacing, const Point3& axis);

// Reflection of p across the infinite plane containing `plane`. Involution.
Point3 mirror_point(const Point3& p, const PlaneSpec& plane);

ArrayGeometry mirror_array(const ArrayGeometry& array, const PlaneSpec& plane);

// Near-field array response: entry n = exp(j * k * ||u_n - focus||).
Eigen::VectorXcd nf_array_response(const ArrayGeometry& array, const Point3& focus, double wavenumber);

}  // namespace nfchan
