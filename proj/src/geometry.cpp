// SPDX-License-Identifier: Apache-2.0
//
// nfchan -- near-field MIMO channels with non-ideal surface reflections
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "nfchan/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace nfchan {

namespace {

constexpr double kOrthoTol = 1e-12;

void require_finite(const Point3& p, const char* what) {
    if (!p.allFinite()) throw std::invalid_argument(std::string(what) + ": components must be finite");
}

void require_unit(const Point3& v, const char* what) {
    if (std::abs(v.norm() - 1.0) > kOrthoTol)
        throw std::invalid_argument(std::string(what) + ": vector must have unit norm");
}

}  // namespace

PlaneSpec::PlaneSpec(const Point3& origin, const Point3& normal, const Point3& axis_u, const Point3& axis_v,
                     double extent_u, double extent_v)
    : origin_(origin), normal_(normal), axis_u_(axis_u), axis_v_(axis_v), extent_u_(extent_u), extent_v_(extent_v) {
    require_finite(origin, "PlaneSpec origin");
    require_unit(normal, "PlaneSpec normal");
    require_unit(axis_u, "PlaneSpec axis_u");
    require_unit(axis_v, "PlaneSpec axis_v");
    if (std::abs(normal.dot(axis_u)) > kOrthoTol || std::abs(normal.dot(axis_v)) > kOrthoTol ||
        std::abs(axis_u.dot(axis_v)) > kOrthoTol)
        throw std::invalid_argument("PlaneSpec: normal and in-plane axes must be mutually orthogonal");
    if (!(extent_u > 0.0) || !(extent_v > 0.0)) throw std::invalid_argument("PlaneSpec: extents must be positive");
}

ArrayGeometry::ArrayGeometry(std::vector<Point3> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw std::invalid_argument("ArrayGeometry: at least one element required");
    center_.setZero();
    for (const auto& e : elements_) {
        require_finite(e, "ArrayGeometry element");
        center_ += e;
    }
    center_ /= static_cast<double>(elements_.size());
}

ArrayGeometry make_upa(const Point3& center, int n_u, int n_v, double spacing, const Point3& axis_u,
                       const Point3& axis_v) {
    if (n_u < 1 || n_v < 1) throw std::invalid_argument("make_upa: element counts must be >= 1");
    if (!(spacing > 0.0)) throw std::invalid_argument("make_upa: spacing must be positive");
    require_unit(axis_u, "make_upa axis_u");
    require_unit(axis_v, "make_upa axis_v");
    if (std::abs(axis_u.dot(axis_v)) > kOrthoTol)
        throw std::invalid_argument("make_upa: axes must be orthonormal");

    std::vector<Point3> elements;
    elements.reserve(static_cast<std::size_t>(n_u) * n_v);
    const double off_u = 0.5 * (n_u - 1);
    const double off_v = 0.5 * (n_v - 1);
    for (int iu = 0; iu < n_u; ++iu)
        for (int iv = 0; iv < n_v; ++iv)
            elements.push_back(center + spacing * (iu - off_u) * axis_u + spacing * (iv - off_v) * axis_v);
    return ArrayGeometry(std::move(elements));
}

ArrayGeometry make_ula(const Point3& center, int n, double spacing, const Point3& axis) {
    // Any unit vector orthogonal to `axis` works for the degenerate v-axis.
    Point3 other = std::abs(axis.x()) < 0.9 ? Point3(1, 0, 0) : Point3(0, 1, 0);
    Point3 axis_v = axis.cross(other).normalized();
    return make_upa(center, n, 1, spacing, axis, axis_v);
}

Point3 mirror_point(const Point3& p, const PlaneSpec& plane) {
    return p - 2.0 * plane.signed_distance(p) * plane.normal();
}

ArrayGeometry mirror_array(const ArrayGeometry& array, const PlaneSpec& plane) {
    std::vector<Point3> mirrored;
    mirrored.reserve(array.size());
    for (const auto& e : array.elements()) mirrored.push_back(mirror_point(e, plane));
    return ArrayGeometry(std::move(mirrored));
}

Eigen::VectorXcd nf_array_response(const ArrayGeometry& array, const Point3& focus, double wavenumber) {
    if (!(wavenumber > 0.0)) throw std::invalid_argument("nf_array_response: wavenumber must be positive");
    Eigen::VectorXcd a(array.size());
    for (std::size_t n = 0; n < array.size(); ++n) {
        const double phase = wavenumber * (array.element(n) - focus).norm();
        a[static_cast<Eigen::Index>(n)] = std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return a;
}

}  // namespace nfchan
