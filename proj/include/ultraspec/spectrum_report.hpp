#pragma once

#include <string>
#include <vector>

namespace ultraspec {

enum class MultiplicityClass { Finite, Infinite };
enum class SupportClass { Compact, Full };

// Where an eigenvalue comes from, following the splitting of Spec(H):
//   Xi1      -- eigenvalue of L that survives perturbation (infinite mult.)
//   Xi2      -- block-shifted L eigenvalue lambda(T') - sigma (or + sigma)
//   Xi3      -- secular root in a spectral gap, eigenfunction of full support
//   XiMinus  -- negative eigenvalue
//   GapRoot  -- secular root reported before sign classification
//   LEigenvalue -- plain Laplacian eigenvalue (unperturbed listing)
enum class Origin { Xi1, Xi2, Xi3, XiMinus, GapRoot, LEigenvalue };

inline const char* to_string(Origin o) {
  switch (o) {
    case Origin::Xi1: return "Xi1";
    case Origin::Xi2: return "Xi2";
    case Origin::Xi3: return "Xi3";
    case Origin::XiMinus: return "Xi-";
    case Origin::GapRoot: return "gap-root";
    case Origin::LEigenvalue: return "L-eigenvalue";
  }
  return "?";
}

struct SpectrumLine {
  double value = 0.0;
  MultiplicityClass mult_class = MultiplicityClass::Finite;
  long long multiplicity = 1;  // meaningful for Finite only
  SupportClass support = SupportClass::Compact;
  Origin origin = Origin::LEigenvalue;
  int block = -1;                   // originating block index, if any
  bool accumulation_point = false;  // marker row, not an eigenvalue
};

struct SpectrumReport {
  std::vector<SpectrumLine> lines;
};

}  // namespace ultraspec
