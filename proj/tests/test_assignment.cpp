#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "rinfer/assignment.hpp"
#include "rinfer/error.hpp"
#include "rinfer/rng.hpp"

using namespace rinfer;

TEST_CASE("mechanism names round-trip") {
  CHECK(parse_mechanism("tr") == Mechanism::tr);
  CHECK(parse_mechanism("at") == Mechanism::at);
  CHECK(mechanism_name(Mechanism::tr) == std::string("tr"));
  CHECK(mechanism_name(Mechanism::at) == std::string("at"));
  CHECK_THROWS_AS(parse_mechanism("both"), Error);
}

TEST_CASE("spec validation") {
  CHECK_NOTHROW(MechanismSpec::treatment_reversal(1).validate(1));
  CHECK_THROWS_AS(MechanismSpec::treatment_reversal(0).validate(3), Error);
  CHECK_THROWS_AS(MechanismSpec::treatment_reversal(2).validate(0), Error);

  CHECK_NOTHROW(MechanismSpec::adoption_time(3, {-2, -1, 0}).validate(4));
  CHECK_NOTHROW(MechanismSpec::adoption_time(3, {-1, 0, 2}).validate(4));
  // Offsets must keep both sides of every shifted split nonempty.
  CHECK_THROWS_AS(MechanismSpec::adoption_time(3, {-3, 0}).validate(4), Error);
  CHECK_THROWS_AS(MechanismSpec::adoption_time(3, {0, 3}).validate(4), Error);
  CHECK_THROWS_AS(MechanismSpec::adoption_time(3, {-2, -1}).validate(4),
                  Error);
  CHECK_THROWS_AS(MechanismSpec::adoption_time(3, {}).validate(4), Error);
  CHECK_THROWS_AS(MechanismSpec::adoption_time(3, {0, 0, 1}).validate(4),
                  Error);
}

TEST_CASE("backdated support factory") {
  MechanismSpec s = MechanismSpec::adoption_time_backdated(7, 6);
  CHECK(s.offsets == std::vector<int>{-6, -5, -4, -3, -2, -1, 0});
  CHECK(s.support_size() == 7);
  CHECK(s.zero_offset_index() == 6);
  CHECK_NOTHROW(s.validate(62));
  CHECK_THROWS_AS(MechanismSpec::adoption_time_backdated(3, 3).validate(4),
                  Error);
  CHECK_THROWS_AS(MechanismSpec::adoption_time_backdated(3, -1), Error);
}

TEST_CASE("assignment space size") {
  CHECK(MechanismSpec::treatment_reversal(1).space_size(10) == 1024);
  CHECK(MechanismSpec::adoption_time(3, {-2, -1, 0}).space_size(10) == 59049);
  CHECK(MechanismSpec::treatment_reversal(1).space_size(63) ==
        (uint64_t{1} << 63));
  CHECK(MechanismSpec::treatment_reversal(1).space_size(64) == UINT64_MAX);
  CHECK(MechanismSpec::adoption_time(2, {-1, 0}).space_size(0) == 1);
}

TEST_CASE("factual draw is the observed orientation") {
  auto tr = factual_draw(MechanismSpec::treatment_reversal(2), 3);
  CHECK(tr.bits == std::vector<uint8_t>{1, 1, 1});
  auto at = factual_draw(MechanismSpec::adoption_time(2, {-1, 0}), 3);
  CHECK(at.offsets == std::vector<int>{0, 0, 0});

  // Factual: untreated before adoption, treated afterwards.
  for (int c = 0; c < 4; ++c) {
    CHECK(treated_in_column(tr, 0, c, 2) == (c >= 2));
    CHECK(treated_in_column(at, 0, c, 2) == (c >= 2));
  }
}

TEST_CASE("treated columns under shifted and reversed draws") {
  AssignmentDraw rev{Mechanism::tr, {0}, {}};
  for (int c = 0; c < 4; ++c) CHECK(treated_in_column(rev, 0, c, 2) == (c < 2));

  AssignmentDraw early{Mechanism::at, {}, {-1}};
  for (int c = 0; c < 4; ++c)
    CHECK(treated_in_column(early, 0, c, 2) == (c >= 1));

  AssignmentMatrix m = expand(early, 2);
  CHECK(m.cells == std::vector<uint8_t>{0, 1, 1, 1});
}

TEST_CASE("enumeration is lexicographic with unit 0 most significant") {
  DrawEnumerator en(MechanismSpec::treatment_reversal(1), 2);
  REQUIRE(en.size() == 4);
  CHECK(en.at(0).bits == std::vector<uint8_t>{0, 0});
  CHECK(en.at(1).bits == std::vector<uint8_t>{0, 1});
  CHECK(en.at(2).bits == std::vector<uint8_t>{1, 0});
  CHECK(en.at(3).bits == std::vector<uint8_t>{1, 1});
  CHECK_THROWS_AS(en.at(4), Error);

  DrawEnumerator at_en(MechanismSpec::adoption_time(2, {-1, 0, 1}), 2);
  REQUIRE(at_en.size() == 9);
  CHECK(at_en.at(0).offsets == std::vector<int>{-1, -1});
  CHECK(at_en.at(1).offsets == std::vector<int>{-1, 0});
  CHECK(at_en.at(4).offsets == std::vector<int>{0, 0});
  CHECK(at_en.at(8).offsets == std::vector<int>{1, 1});
}

TEST_CASE("enumeration covers the space without repeats") {
  DrawEnumerator en(MechanismSpec::adoption_time(3, {-2, 0, 1}), 4);
  std::set<std::vector<int>> seen;
  for (uint64_t k = 0; k < en.size(); ++k) seen.insert(en.at(k).offsets);
  CHECK(seen.size() == 81);
}

TEST_CASE("enumeration cap") {
  CHECK_NOTHROW(DrawEnumerator(MechanismSpec::treatment_reversal(1), 20));
  CHECK_THROWS_AS(DrawEnumerator(MechanismSpec::treatment_reversal(1), 21),
                  Error);
  CHECK_NOTHROW(DrawEnumerator(MechanismSpec::treatment_reversal(1), 21,
                               uint64_t{1} << 21));
}

TEST_CASE("sampling is a pure function of the stream position") {
  MechanismSpec spec = MechanismSpec::adoption_time(4, {-3, -1, 0, 2});
  StreamSeed pos{rng::derive_stream(99, 0), 1234};
  auto a = sample_draw(spec, 8, pos);
  auto b = sample_draw(spec, 8, pos);
  CHECK(a == b);
  auto c = sample_draw(spec, 8, {pos.key, pos.sim + 1});
  CHECK_FALSE(a == c);
}

TEST_CASE("sampling matches the per-unit hash contract") {
  MechanismSpec tr = MechanismSpec::treatment_reversal(2);
  StreamSeed pos{0xABCDEF, 77};
  auto draw = sample_draw(tr, 16, pos);
  for (int i = 0; i < 16; ++i) {
    bool bit = rng::tr_bit(rng::draw_hash(pos.key, pos.sim, i));
    CHECK(draw.bits[i] == (bit ? 1 : 0));
  }

  MechanismSpec at = MechanismSpec::adoption_time(4, {-2, 0, 3});
  auto at_draw = sample_draw(at, 16, pos);
  for (int i = 0; i < 16; ++i) {
    uint32_t idx = rng::at_index(rng::draw_hash(pos.key, pos.sim, i), 3);
    CHECK(at_draw.offsets[i] == at.offsets[idx]);
  }
}

TEST_CASE("seeded sampling reaches every assignment") {
  MechanismSpec spec = MechanismSpec::treatment_reversal(1);
  std::set<std::vector<uint8_t>> seen;
  for (uint64_t s = 0; s < 160; ++s)
    seen.insert(sample_draw(spec, 4, {rng::derive_stream(7, 0), s}).bits);
  CHECK(seen.size() == 16);
}

TEST_CASE("support index stays in range and hits every offset") {
  int counts[3] = {0, 0, 0};
  for (uint64_t h = 0; h < 30000; ++h) {
    uint32_t idx = rng::at_index(rng::mix64(h), 3);
    REQUIRE(idx < 3);
    ++counts[idx];
  }
  for (int c : counts) CHECK(c > 8000);
}
