#ifndef LENGTHLAB_SPACEFILE_HPP
#define LENGTHLAB_SPACEFILE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lengthlab/catalog.hpp"

namespace lengthlab {

// Space-definition text format, one `key = value` pair per line, `#`
// comments. Two flavors:
//
// Catalog reference:
//   catalog = flat_torus
//   param side = 1.0
//
// Explicit listing:
//   name = my_space
//   chart = segment 2.0
//   chart = flat_disk 1.0
//   chart = flat_polygon 0,0 1,0 1,1 0,1
//   chart = sphere [0,1,0 0,-1,0]         # inward hemisphere normals
//   point_gluing = 0:0,0,0 1:2,0,0        # chart:x,y,z representatives
//   arc_gluing = 0:0,0,0;0,0.5,0;0,1,0 0:1,0,0;1,0.5,0;1,1,0
//                                          # chart:a;via;b per glued side
//   eta = 0.01
//   delta_witness = 0.45
//   cba_kappa = 0
catalog::SpacePtr parse_space_text(const std::string& text);
catalog::SpacePtr load_space_file(const std::string& path);

// Accepts either a catalog name (built with default parameters) or a path
// to a space-definition file.
catalog::SpacePtr resolve_space(const std::string& name_or_path);

// Human-readable summary: charts, gluings, net size, declared certificates.
std::string describe_space(const ChartComplex& X);

// FNV-1a over the raw definition text, for run manifests.
std::uint64_t text_hash(const std::string& text);

struct SpaceValidation {
  bool ok = true;
  std::vector<std::string> issues;
  double witness_validated = 0;  // scale up to which sampled segments minimize
};

// Sampled metric axioms (triangle inequality on random triples) plus
// validation of the declared uniformly-minimizing witness.
SpaceValidation validate_space(const ChartComplex& X, int n_triples,
                               int n_segments, std::uint64_t seed = 1234);

}  // namespace lengthlab

#endif
