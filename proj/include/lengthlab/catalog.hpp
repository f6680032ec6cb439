#ifndef LENGTHLAB_CATALOG_HPP
#define LENGTHLAB_CATALOG_HPP

#include <map>
#include <memory>
#include <string>

#include "lengthlab/charts.hpp"

namespace lengthlab::catalog {

using SpacePtr = std::shared_ptr<ChartComplex>;

// Segments [0, 1+1/j], j = 1..J, endpoints glued to common points p, q;
// optionally one extra unit segment (which makes the space geodesic).
SpacePtr build_line_pile(int J, bool with_unit_segment);

// Unit-sphere lune of the given angle between poles p1, p2, with a line
// segment attached at each pole. lune_angle = pi gives the pinned
// hemisphere.
SpacePtr build_pinned_sector(double lune_angle, double segment_length);
SpacePtr build_pinned_hemisphere(double segment_length);

// Common line plus `depth` auxiliary lines, line k attached at the
// multiples of 1/k, truncated to [0, window].
SpacePtr build_rationally_attached_line(int depth, double window);

// Circle of circumference 2*pi with marked points p1, p2 at arc distance
// r0, joined by an extra chord segment of the given length.
SpacePtr build_circle_with_chord(double r0, double chord);

// Two round spheres glued at the four vertices of a regular tetrahedron.
SpacePtr build_tetra_bisphere();

// Three unit hemispheres glued along a common equator.
SpacePtr build_triple_hemisphere();

SpacePtr build_flat_disk(double radius);

// Surface of the cube [0, edge]^3 as six square charts.
SpacePtr build_cube_surface(double edge);

// Square side x side with opposite edges identified.
SpacePtr build_flat_torus(double side);

// A line with J cylinders (circumference 2*pi/j) glued along it,
// truncated to height 2*window.
SpacePtr build_cylinder_line(int J, double window = 3.0);

// Round unit sphere (one chart).
SpacePtr build_unit_sphere();

// Flat square [-half, half]^2 (one chart, boundary unglued).
SpacePtr build_flat_plane(double half_width);

// Build by name with key=value parameters; unknown name throws.
SpacePtr build_by_name(const std::string& name,
                       const std::map<std::string, double>& params);

}  // namespace lengthlab::catalog

#endif
