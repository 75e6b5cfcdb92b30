#include "rinfer/assignment.hpp"

#include <algorithm>

#include "rinfer/error.hpp"
#include "rinfer/rng.hpp"

namespace rinfer {

const char* mechanism_name(Mechanism m) {
  return m == Mechanism::tr ? "tr" : "at";
}

Mechanism parse_mechanism(const std::string& name) {
  if (name == "tr") return Mechanism::tr;
  if (name == "at") return Mechanism::at;
  fail("unknown mechanism '" + name + "' (expected tr or at)");
}

MechanismSpec MechanismSpec::treatment_reversal(int tau) {
  MechanismSpec s;
  s.kind = Mechanism::tr;
  s.tau = tau;
  return s;
}

MechanismSpec MechanismSpec::adoption_time(int tau, std::vector<int> offsets) {
  MechanismSpec s;
  s.kind = Mechanism::at;
  s.tau = tau;
  s.offsets = std::move(offsets);
  std::sort(s.offsets.begin(), s.offsets.end());
  return s;
}

MechanismSpec MechanismSpec::adoption_time_backdated(int tau, int k) {
  require(k >= 0, "backdate count must be nonnegative");
  std::vector<int> offsets;
  for (int d = -k; d <= 0; ++d) offsets.push_back(d);
  return adoption_time(tau, std::move(offsets));
}

void MechanismSpec::validate(int n_units) const {
  require(tau >= 1, "window halfwidth tau must be at least 1");
  require(n_units >= 1, "need at least one unit");
  if (kind == Mechanism::tr) {
    require(offsets.empty(), "treatment-reversal takes no offset support");
    return;
  }
  require(!offsets.empty(), "adoption-time support is empty");
  for (size_t i = 1; i < offsets.size(); ++i)
    require(offsets[i] > offsets[i - 1],
            "adoption-time support has duplicate offsets");
  bool has_zero = false;
  for (int d : offsets) {
    if (d == 0) has_zero = true;
    if (d <= -tau || d >= tau)
      fail("adoption-time offset " + std::to_string(d) +
           " outside [" + std::to_string(-tau + 1) + ", " +
           std::to_string(tau - 1) + "] leaves an empty side of the window");
  }
  require(has_zero,
          "adoption-time support must contain 0 (the factual adoption)");
}

uint64_t MechanismSpec::space_size(int n_units) const {
  uint64_t base = kind == Mechanism::tr ? 2 : offsets.size();
  uint64_t size = 1;
  for (int i = 0; i < n_units; ++i) {
    if (size > UINT64_MAX / base) return UINT64_MAX;
    size *= base;
  }
  return size;
}

int MechanismSpec::zero_offset_index() const {
  for (size_t j = 0; j < offsets.size(); ++j)
    if (offsets[j] == 0) return static_cast<int>(j);
  fail("adoption-time support has no offset 0");
}

AssignmentDraw factual_draw(const MechanismSpec& spec, int n_units) {
  spec.validate(n_units);
  AssignmentDraw d;
  d.kind = spec.kind;
  if (spec.kind == Mechanism::tr)
    d.bits.assign(n_units, 1);  // observed orientation: treated after adoption
  else
    d.offsets.assign(n_units, 0);
  return d;
}

AssignmentDraw sample_draw(const MechanismSpec& spec, int n_units,
                           StreamSeed seed) {
  spec.validate(n_units);
  AssignmentDraw d;
  d.kind = spec.kind;
  uint64_t state = rng::sim_state(seed.key, seed.sim);
  if (spec.kind == Mechanism::tr) {
    d.bits.resize(n_units);
    for (int i = 0; i < n_units; ++i)
      d.bits[i] = rng::tr_bit(rng::draw_hash_from_state(state, i)) ? 1 : 0;
  } else {
    d.offsets.resize(n_units);
    auto j = static_cast<uint32_t>(spec.offsets.size());
    for (int i = 0; i < n_units; ++i) {
      uint64_t h = rng::draw_hash_from_state(state, i);
      d.offsets[i] = spec.offsets[rng::at_index(h, j)];
    }
  }
  return d;
}

DrawEnumerator::DrawEnumerator(const MechanismSpec& spec, int n_units,
                               uint64_t cap)
    : spec_(spec), n_(n_units) {
  spec_.validate(n_units);
  size_ = spec_.space_size(n_units);
  if (size_ > cap)
    fail("assignment space of " +
         (size_ == UINT64_MAX ? std::string("more than 2^64")
                              : std::to_string(size_)) +
         " draws exceeds the enumeration cap of " + std::to_string(cap));
}

AssignmentDraw DrawEnumerator::at(uint64_t index) const {
  require(index < size_, "enumeration index out of range");
  AssignmentDraw d;
  d.kind = spec_.kind;
  if (spec_.kind == Mechanism::tr) {
    d.bits.resize(n_);
    for (int i = 0; i < n_; ++i)
      d.bits[i] = (index >> (n_ - 1 - i)) & 1;  // unit 0 most significant
  } else {
    auto j = static_cast<uint64_t>(spec_.offsets.size());
    d.offsets.resize(n_);
    uint64_t rest = index;
    for (int i = n_ - 1; i >= 0; --i) {
      d.offsets[i] = spec_.offsets[rest % j];
      rest /= j;
    }
  }
  return d;
}

bool treated_in_column(const AssignmentDraw& draw, int unit, int col,
                       int tau) {
  if (draw.kind == Mechanism::tr) {
    bool post = col >= tau;
    return draw.bits[unit] ? post : !post;
  }
  // Column c covers period a0 - tau + c; treated once t >= a0 + offset.
  return col - tau >= draw.offsets[unit];
}

AssignmentMatrix expand(const AssignmentDraw& draw, int tau) {
  require(tau >= 1, "window halfwidth tau must be at least 1");
  AssignmentMatrix m;
  m.n = draw.n();
  m.tau = tau;
  m.cells.resize(static_cast<size_t>(m.n) * m.cols());
  for (int i = 0; i < m.n; ++i)
    for (int c = 0; c < m.cols(); ++c)
      m.cells[i * m.cols() + c] = treated_in_column(draw, i, c, tau) ? 1 : 0;
  return m;
}

}  // namespace rinfer
