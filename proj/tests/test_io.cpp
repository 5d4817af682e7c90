#include "fop/acceptance.hpp"
#include "fop/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace fop;

namespace {

std::string problems_dir() { return FOP_PROBLEMS_DIR; }

std::vector<std::string> problem_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(problems_dir())) {
    const auto name = e.path().filename().string();
    if (e.path().extension() == ".json" && name.rfind("solve_", 0) != 0 && name.rfind("invalid_", 0) != 0) out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Io, ProblemRoundTrip) {
  auto files = problem_files();
  ASSERT_FALSE(files.empty());
  for (const auto& f : files) {
    auto p = problem_from_json(read_json_file(f));
    auto again = problem_from_json(json::parse(problem_to_json(p).dump()));
    EXPECT_TRUE(again == p) << f;
  }
}

TEST(Io, ProblemsLoad) {
  for (const auto& f : problem_files()) {
    auto l = load_problem(problem_from_json(read_json_file(f)));
    EXPECT_GT(l.chart.v.dim(), 0) << f;
  }
}

TEST(Io, ReportRoundTripAndReproduction) {
  const auto path = problems_dir() + "/z2_z_minus_z3.json";
  auto input = read_json_file(path);
  auto l = load_problem(problem_from_json(input));
  auto a = make_report_file(input, euler_counts(l.chart, l.section, l.options));
  auto text = report_file_to_json(a).dump();
  auto parsed = report_file_from_json(json::parse(text));
  EXPECT_TRUE(parsed == a);
  // same seed, same bytes
  auto b = make_report_file(input, euler_counts(l.chart, l.section, l.options));
  EXPECT_EQ(report_file_to_json(b).dump(), text);
  EXPECT_EQ(a.input_digest, input_digest(input));
  EXPECT_EQ(a.input_digest.size(), 16u);
}

TEST(Io, DigestIsKeyOrderIndependent) {
  auto a = json::parse(R"({"b": 1, "a": [1, 2]})");
  auto b = json::parse(R"({"a": [1, 2], "b": 1})");
  EXPECT_EQ(input_digest(a), input_digest(b));
  EXPECT_NE(input_digest(a), input_digest(json::parse(R"({"a": [2, 1], "b": 1})")));
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
}

TEST(Io, NonFiniteNumbers) {
  EXPECT_EQ(real_to_json(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_TRUE(std::isinf(real_from_json("inf")));
  EXPECT_EQ(real_from_json(real_to_json(0.1)), 0.1);
}

TEST(Io, SystemAndSolutionsRoundTrip) {
  auto sys = system_from_json(read_json_file(problems_dir() + "/solve_circle_line.json"));
  EXPECT_EQ(sys.size(), 2);
  auto again = system_from_json(system_to_json(sys));
  for (int i = 0; i < sys.size(); ++i) EXPECT_EQ(again.equations[i], sys.equations[i]);
  auto sol = solve_system(sys);
  auto back = solutions_from_json(json::parse(solutions_to_json(sol).dump()));
  ASSERT_EQ(back.points.size(), sol.points.size());
  for (size_t i = 0; i < sol.points.size(); ++i) EXPECT_EQ(back.points[i].x, sol.points[i].x);
}

TEST(Io, MalformedInputsAreValidationErrors) {
  EXPECT_THROW(problem_from_json(json::parse(R"({"group": {"kind": "cyclic", "n": 2}})")), ValidationError);
  EXPECT_THROW(group_spec_from_json(json::parse(R"({"kind": "dihedral", "n": 4})")), ValidationError);
  EXPECT_THROW(complex_from_json(json::parse(R"([1, 2, 3])")), ValidationError);
  EXPECT_THROW(read_json_file(problems_dir() + "/does_not_exist.json"), ValidationError);
  auto bad_exp = json::parse(R"([{"exponents": [1, 2], "target_coord": 0, "coeff": [1, 0]}])");
  EXPECT_THROW(polymap_from_json(bad_exp, 1, 1), ValidationError);
  auto bad_target = json::parse(R"([{"exponents": [1], "target_coord": 3, "coeff": [1, 0]}])");
  EXPECT_THROW(polymap_from_json(bad_target, 1, 1), ValidationError);
}

TEST(Io, NonEquivariantSectionRejected) {
  auto j = read_json_file(problems_dir() + "/z2_z_minus_z3.json");
  j["section"].push_back({{"exponents", {2}}, {"target_coord", 0}, {"coeff", {1.0, 0.0}}});
  EXPECT_THROW(load_problem(problem_from_json(j)), ValidationError);
}

TEST(Io, DegreeBelowGroupOrderNeedsOverride) {
  auto j = read_json_file(problems_dir() + "/z3_z_minus_z4.json");
  j["degree"] = 2;
  j["section"] = json::array({{{"exponents", {1}}, {"target_coord", 0}, {"coeff", {1.0, 0.0}}}});
  EXPECT_THROW(load_problem(problem_from_json(j)), ValidationError);
  j["degree_override"] = true;
  auto l = load_problem(problem_from_json(j));
  EXPECT_FALSE(l.chart.warnings.empty());
}
