#pragma once
// Built-in weight profiles. cos_y has a 1-D reduction (used by the test
// oracles), cos_xy produces genuinely 2-D contact sets, bump concentrates
// negative curvature in a disc, table loads whatever the user measured.

#include "tunnellab/grid.hpp"

#include <string>
#include <vector>

namespace tunnel {

struct ProfileSpec {
  std::string name = "cos_y";
  double A = 1.0;          // amplitude, f scales linearly with it
  double sigma = 0.15;     // bump width; ignored elsewhere
  std::string table_path;  // required for "table"
};

// profile values:
//   cos_y  : A cos(2 pi y)
//   cos_xy : A (cos(2 pi x) + cos(2 pi y))
//   bump   : -A times a periodized Gaussian of width sigma centered at (1/2, 1/2)
//   table  : row-major values from a text file: first token N, then N*N numbers
ScalarField build_profile(const ProfileSpec& spec, int N);

bool profile_known(const std::string& name);
std::vector<std::string> profile_names();

// writes "N" then N*N values in the table format build_profile reads back
void write_table_field(const ScalarField& f, const std::string& path);

}  // namespace tunnel
