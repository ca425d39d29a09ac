#include <gtest/gtest.h>

#include <random>
#include <set>

#include "thzris/surface.hpp"

using namespace thzris;

namespace {

PhaseProfile random_profile(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(0.0, 1.0), ph(0.0, two_pi);
  const auto f = Frequency::ghz(140);
  std::vector<Complex> c(static_cast<std::size_t>(rows) * cols);
  for (auto& v : c) v = std::polar(amp(rng), ph(rng));
  return PhaseProfile({rows, cols, f.wavelength() / 2, f.wavelength() / 2}, std::move(c), f);
}

}  // namespace

TEST(Taper, CentreAndEdge) {
  const TaperSpec t{-10.0};
  EXPECT_DOUBLE_EQ(t.amplitude(0.0), 1.0);
  EXPECT_NEAR(t.amplitude(1.0), db_to_amplitude(-10.0), 1e-15);
  EXPECT_NEAR(t.amplitude(2.0), db_to_amplitude(-10.0), 1e-15);
  EXPECT_DOUBLE_EQ(TaperSpec::uniform().amplitude(0.7), 1.0);
  EXPECT_THROW(TaperSpec{3.0}.validate(), InvalidArgument);
}

TEST(Taper, CornerElementsSitOnPedestal) {
  const auto f = Frequency::ghz(140);
  const auto p = synthesize_profile(ApertureSpec::from_cells(20, f), Direction::broadside(), Direction::broadside(),
                                    TaperSpec{-10.0});
  EXPECT_NEAR(std::abs(p.at(0, 0)), db_to_amplitude(-10.0), 1e-12);
  EXPECT_GT(std::abs(p.at(10, 10)), 0.95);
}

TEST(Synthesis, LatticeIsCentred) {
  const PhaseProfile::Layout lay{3, 4, 1.0, 2.0};
  const auto pos = PhaseProfile::lattice_positions(lay);
  EXPECT_DOUBLE_EQ(pos[0].x, -1.5);
  EXPECT_DOUBLE_EQ(pos[0].y, -2.0);
  EXPECT_DOUBLE_EQ(pos[11].x, 1.5);
  EXPECT_DOUBLE_EQ(pos[11].y, 2.0);
}

TEST(Synthesis, SpecularNeedsNoPhase) {
  const auto in = Direction::degrees(30.0, 0.0);
  EXPECT_EQ(anomalous_phase(0.01, -0.02, 2900.0, in, in), 0.0);
}

TEST(Synthesis, LinearGradientAlongX) {
  const auto f = Frequency::ghz(140);
  const auto a = ApertureSpec::from_cells(8, f);
  const auto p = synthesize_profile(a, Direction::broadside(), Direction::degrees(30.0), TaperSpec::uniform());
  // Half-wavelength pitch, sin 30° = 0.5: a quarter turn per column.
  for (int c = 0; c + 1 < p.cols(); ++c)
    EXPECT_NEAR(phase_distance(std::arg(p.at(2, c)) - std::arg(p.at(2, c + 1)), 0.5 * pi), 0.0, 1e-9);
  EXPECT_NEAR(phase_distance(std::arg(p.at(0, 3)), std::arg(p.at(7, 3))), 0.0, 1e-9);
}

TEST(Synthesis, RejectsGainyCoefficients) {
  EXPECT_THROW(PhaseProfile({1, 1, 1.0, 1.0}, std::vector<Complex>{Complex(1.1, 0.0)}, Frequency::ghz(1)),
               InvalidArgument);
  EXPECT_THROW(PhaseProfile({2, 2, 1.0, 1.0}, std::vector<Complex>(3), Frequency::ghz(1)), InvalidArgument);
}

TEST(Quantization, LevelsAndOffset) {
  const auto levels = quantization_levels(2);
  ASSERT_EQ(levels.size(), 4u);
  EXPECT_DOUBLE_EQ(levels[1], 0.5 * pi);
  EXPECT_DOUBLE_EQ(quantization_levels(1, LevelOffset::HalfLevel)[0], 0.5 * pi);
  EXPECT_THROW(quantization_levels(0), InvalidArgument);
  EXPECT_THROW(quantization_levels(9), InvalidArgument);
}

TEST(Quantization, NearestLevelWithLowerTieBreak) {
  EXPECT_EQ(quantize_phase_index(0.2, 2), 0);
  EXPECT_EQ(quantize_phase_index(0.25 * pi, 2), 0);
  EXPECT_EQ(quantize_phase_index(0.26 * pi, 2), 1);
  EXPECT_EQ(quantize_phase_index(1.75 * pi, 2), 3);
  EXPECT_EQ(quantize_phase_index(1.9 * pi, 2), 0);
  EXPECT_EQ(quantize_phase_index(0.5 * pi, 1), 0);
}

TEST(Quantization, Idempotent) {
  const auto p = random_profile(9, 7, 1);
  for (int bits = 1; bits <= 4; ++bits) {
    const auto q = quantize_profile(p, bits);
    const auto qq = quantize_profile(q, bits);
    ASSERT_EQ(q.states().size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_EQ(q.states()[i], qq.states()[i]);
      EXPECT_NEAR(std::abs(q.coefficients()[i]), std::abs(p.coefficients()[i]), 1e-12);
    }
  }
}

TEST(Quantization, CoarserLevelsAreSubsetOfFiner) {
  for (int bits = 1; bits < 6; ++bits) {
    const auto coarse = quantization_levels(bits);
    const auto fine = quantization_levels(bits + 1);
    for (double c : coarse) {
      bool found = false;
      for (double f : fine) found = found || std::abs(c - f) < 1e-12;
      EXPECT_TRUE(found);
    }
  }
}

TEST(Quantization, ErrorBoundedByHalfStep) {
  const auto p = random_profile(16, 16, 2);
  for (int bits = 1; bits <= 8; ++bits) {
    const auto q = quantize_profile(p, bits);
    for (std::size_t i = 0; i < p.size(); ++i)
      EXPECT_LE(phase_distance(q.phases()[i], p.phases()[i]), pi / (1 << bits) + 1e-12);
  }
}

TEST(CellTable, InterpolatesAndRejectsOutOfBand) {
  const auto table = default_cell_table();
  EXPECT_EQ(table.state_count(), 4u);
  const Complex r = table.response(2, Frequency::ghz(150));
  EXPECT_NEAR(std::abs(r), db_to_amplitude(-3.0), 1e-12);
  EXPECT_NEAR(phase_distance(std::arg(r), pi), 0.0, 1e-12);
  EXPECT_THROW(table.response(0, Frequency::ghz(250)), OutOfBandError);
}

TEST(CellTable, LinearPhaseInterpolation) {
  const UnitCellTable table({{{100e9, 1.0, 0.0}, {200e9, 0.5, 1.0}}});
  const Complex r = table.response(0, Frequency::ghz(125));
  EXPECT_NEAR(std::abs(r), 0.875, 1e-12);
  EXPECT_NEAR(std::arg(r), 0.25, 1e-12);
  EXPECT_THROW(UnitCellTable({{{200e9, 1.0, 0.0}, {100e9, 1.0, 0.0}}}), InvalidArgument);
  EXPECT_THROW(UnitCellTable({{{100e9, 1.5, 0.0}}}), InvalidArgument);
}

TEST(CellTable, ApplyNeedsMatchingQuantizedProfile) {
  const auto p = random_profile(4, 4, 3);
  const auto f = Frequency::ghz(140);
  EXPECT_THROW(apply_cell_model(p, default_cell_table(), f), InvalidArgument);
  EXPECT_THROW(apply_cell_model(quantize_profile(p, 1), default_cell_table(), f), InvalidArgument);
  const auto q = quantize_profile(p, 2);
  const auto m = apply_cell_model(q, default_cell_table(), f);
  for (std::size_t i = 0; i < p.size(); ++i)
    EXPECT_NEAR(std::abs(m.coefficients()[i]), q.illumination()[i] * db_to_amplitude(-3.0), 1e-12);
}

TEST(Codebook, OneBeamPerDirection) {
  const auto a = ApertureSpec::from_cells(8, Frequency::ghz(140));
  const std::vector<Direction> grid = {Direction::degrees(-20.0), Direction::degrees(0.0), Direction::degrees(20.0)};
  const auto book = generate_codebook(a, grid, 2, TaperSpec::uniform());
  ASSERT_EQ(book.size(), 3u);
  for (std::size_t i = 0; i < book.size(); ++i) {
    EXPECT_EQ(book[i].quantization_bits(), 2);
    EXPECT_EQ(book[i].steering_target(), grid[i]);
  }
}
