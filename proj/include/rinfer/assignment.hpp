#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rinfer {

// Two randomization mechanisms over a symmetric window of tau periods on
// each side of the adoption time:
//   tr: each unit's before/after blocks are independently swapped with
//       probability 1/2 (2^n equally likely assignments).
//   at: each unit's adoption time is shifted by an offset drawn uniformly
//       from a finite support of day offsets containing 0 (J^n assignments).
enum class Mechanism { tr, at };

const char* mechanism_name(Mechanism m);
Mechanism parse_mechanism(const std::string& name);

struct MechanismSpec {
  Mechanism kind = Mechanism::tr;
  int tau = 0;
  // AT only: sorted ascending, must contain 0, every offset within
  // [-tau+1, tau-1] so both sides of any shifted split stay nonempty.
  std::vector<int> offsets;

  static MechanismSpec treatment_reversal(int tau);
  static MechanismSpec adoption_time(int tau, std::vector<int> offsets);
  // Support {-(k), ..., 0} after validating k <= tau-1.
  static MechanismSpec adoption_time_backdated(int tau, int k);

  void validate(int n_units) const;

  // Number of distinct assignments, saturating at UINT64_MAX on overflow.
  uint64_t space_size(int n_units) const;

  int support_size() const { return static_cast<int>(offsets.size()); }
  // Position of offset 0 in the support.
  int zero_offset_index() const;
};

// One realized assignment: per-unit reversal bits (tr) or per-unit adoption
// offsets (at).
struct AssignmentDraw {
  Mechanism kind = Mechanism::tr;
  std::vector<uint8_t> bits;  // tr
  std::vector<int> offsets;   // at
  int n() const {
    return static_cast<int>(kind == Mechanism::tr ? bits.size()
                                                  : offsets.size());
  }
  bool operator==(const AssignmentDraw&) const = default;
};

// Expanded treatment indicator over the window: n rows by 2*tau columns,
// column c covering period a0 - tau + c.
struct AssignmentMatrix {
  int n = 0;
  int tau = 0;
  std::vector<uint8_t> cells;  // row-major n x 2*tau
  int cols() const { return 2 * tau; }
  uint8_t at(int unit, int col) const { return cells[unit * cols() + col]; }
};

// The assignment realized in the data: no reversals / no shifts.
AssignmentDraw factual_draw(const MechanismSpec& spec, int n_units);

// Stream position for one simulated draw.
struct StreamSeed {
  uint64_t key = 0;
  uint64_t sim = 0;
};

// Deterministic function of (spec, n, seed); agrees exactly with the batch
// simulation kernels at the same stream position.
AssignmentDraw sample_draw(const MechanismSpec& spec, int n_units,
                           StreamSeed seed);

constexpr uint64_t kDefaultEnumCap = uint64_t{1} << 20;

// Lazy lexicographic enumeration of the full assignment space. Unit 0 is the
// most significant digit.
class DrawEnumerator {
 public:
  DrawEnumerator(const MechanismSpec& spec, int n_units,
                 uint64_t cap = kDefaultEnumCap);
  uint64_t size() const { return size_; }
  AssignmentDraw at(uint64_t index) const;

 private:
  MechanismSpec spec_;
  int n_;
  uint64_t size_;
};

// Whether unit i is treated in window column c under the draw.
bool treated_in_column(const AssignmentDraw& draw, int unit, int col, int tau);

AssignmentMatrix expand(const AssignmentDraw& draw, int tau);

}  // namespace rinfer
