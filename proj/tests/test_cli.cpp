// End-to-end tests for the schurand command-line tool: exit codes, output
// formats, the embedded config header, and byte-identical reruns. The binary
// path arrives through the SCHURAND_BIN compile definition.

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

using nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

// Runs the tool through the shell, capturing stdout; stderr is dropped so
// expected-failure tests stay quiet.
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  std::string cmd = env_prefix + (env_prefix.empty() ? "" : " ") + SCHURAND_BIN +
                    " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  CliResult res;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) res.out.append(buf, got);
  int rc = pclose(pipe);
  res.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return res;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Extracts the JSON payload of a "# name: {...}" trailer line.
json trailer_json(const std::string& text, const std::string& name) {
  const std::string tag = "# " + name + ": ";
  for (const std::string& line : lines_of(text))
    if (line.rfind(tag, 0) == 0) return json::parse(line.substr(tag.size()));
  ADD_FAILURE() << "missing trailer '" << name << "' in output:\n" << text;
  return json();
}

std::string temp_path(const std::string& stem) {
  return testing::TempDir() + "schurand_cli_" + stem;
}

TEST(CliExitCodes, ParseErrorsReturnTwo) {
  EXPECT_EQ(run_cli("").code, 2);                       // missing subcommand
  EXPECT_EQ(run_cli("frobnicate --n 4").code, 2);       // unknown subcommand
  EXPECT_EQ(run_cli("dims --n 4").code, 2);             // missing required flag
  EXPECT_EQ(run_cli("dims --n 4 --d 2 --bogus").code, 2);
  EXPECT_EQ(run_cli("dims --n 4 --d 2 --format xml").code, 2);
  EXPECT_EQ(run_cli("--help").code, 0);
}

TEST(CliExitCodes, ValidationErrorsReturnThree) {
  EXPECT_EQ(run_cli("dims --n 0 --d 2").code, 3);
  EXPECT_EQ(run_cli("qntk --lambda 1,3 --seed 1").code, 3);
  EXPECT_EQ(run_cli("qntk --lambda 3,1 --n 5 --seed 1").code, 3);
  EXPECT_EQ(run_cli("qntk --lambda 2,1,1 --d 2 --seed 1").code, 3);
  EXPECT_EQ(run_cli("code --n 2 --k 3 --d 2 --mode avg").code, 3);
  // Sampling without a seed is a validation error where the seed flag is
  // conditional, and a parse error where it is unconditionally required.
  EXPECT_EQ(run_cli("otoc --n-min 4 --n-max 5 --d 2 --samples 100").code, 3);
  EXPECT_EQ(run_cli("code --n 4 --k 1 --d 2 --mode sample --samples 10").code, 3);
  EXPECT_EQ(run_cli("haar-sample --n 3 --d 2").code, 2);
  EXPECT_EQ(run_cli("qntk --lambda 3,1").code, 2);
}

TEST(CliExitCodes, BudgetErrorsReturnFour) {
  EXPECT_EQ(run_cli("schur --n 13 --d 2").code, 4);  // 2^13 > dense cap
  // Sampled code runs need the dense Schur basis, so they inherit the cap.
  EXPECT_EQ(
      run_cli("code --n 13 --k 1 --d 2 --mode sample --samples 10 --seed 1").code,
      4);
}

TEST(CliDims, SectorTableWithProductSum) {
  CliResult res = run_cli("dims --n 4 --d 2");
  ASSERT_EQ(res.code, 0);
  std::vector<std::string> lines = lines_of(res.out);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "# schurand dims");
  EXPECT_EQ(lines[1].rfind("# config: ", 0), 0u);
  EXPECT_EQ(lines[2], "lambda,dim,mult,product");
  EXPECT_EQ(lines[3], "4,1,5,5");
  EXPECT_EQ(lines[4], "\"3,1\",3,3,9");
  EXPECT_EQ(lines[5], "\"2,2\",2,1,2");
  EXPECT_EQ(lines[6], "total,,,16");
}

TEST(CliDims, JsonFormatRoundTrips) {
  CliResult res = run_cli("dims --n 3 --d 3 --format json");
  ASSERT_EQ(res.code, 0);
  json doc = json::parse(res.out);
  EXPECT_EQ(doc["tool"], "schurand");
  EXPECT_EQ(doc["subcommand"], "dims");
  EXPECT_EQ(doc["config"]["n"], 3);
  EXPECT_EQ(doc["config"]["d"], 3);
  ASSERT_EQ(doc["rows"].size(), 4u);  // three sectors plus the total row
  EXPECT_EQ(doc["rows"][0][0], "3");
  EXPECT_EQ(doc["rows"][3][3], "27");
}

TEST(CliSchur, SummaryAndCacheRoundTrip) {
  const std::string cache = temp_path("schur42.bin");
  std::remove(cache.c_str());

  CliResult first = run_cli("schur --n 4 --d 2 --cache " + cache);
  ASSERT_EQ(first.code, 0);
  EXPECT_NE(first.out.find("dim=16"), std::string::npos);
  EXPECT_NE(first.out.find("sectors=3"), std::string::npos);
  EXPECT_EQ(first.out.find("cache hit"), std::string::npos);

  CliResult second = run_cli("schur --n 4 --d 2 --cache " + cache);
  ASSERT_EQ(second.code, 0);
  EXPECT_NE(second.out.find("cache hit"), std::string::npos);
  EXPECT_NE(second.out.find("dim=16"), std::string::npos);
  std::remove(cache.c_str());
}

TEST(CliSchur, PrintBlocksEmitsGeneratorEntries) {
  CliResult res = run_cli("schur --n 3 --d 2 --print-blocks");
  ASSERT_EQ(res.code, 0);
  std::vector<std::string> lines = lines_of(res.out);
  ASSERT_GE(lines.size(), 4u);
  EXPECT_EQ(lines[2], "generator,lambda,row,col,value");
  // Trivial sector: both adjacent transpositions act as the scalar 1.
  EXPECT_EQ(lines[3], "1,3,0,0,1");
  // Standard sector (2,1): s_1 is diag(1, -1) in the orthogonal basis.
  bool found = false;
  for (const std::string& line : lines)
    if (line == "1,\"2,1\",1,1,-1") found = true;
  EXPECT_TRUE(found);
}

TEST(CliHaarSample, EmitsPerSectorChecksumRows) {
  CliResult res = run_cli("haar-sample --n 3 --d 2 --seed 11 --count 2");
  ASSERT_EQ(res.code, 0);
  std::vector<std::string> lines = lines_of(res.out);
  // Two sectors for n=3, d=2, so 2 draws x 2 sectors = 4 data rows.
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[2], "draw,lambda,dim,mult,re_sum,im_sum,fro_norm");
  // The Frobenius norm of a unitary block is sqrt(dim) exactly.
  EXPECT_NE(lines[4].find(",\"2,1\",2,2,"), std::string::npos);
  double fro = std::stod(lines[4].substr(lines[4].rfind(',') + 1));
  EXPECT_NEAR(fro, std::sqrt(2.0), 1e-12);
}

TEST(CliOtoc, ExactSweepMatchesKnownValuesAndFitsPowerLaw) {
  const std::string out = temp_path("otoc_sweep.csv");
  CliResult res =
      run_cli("otoc --mode sym --d 2 --n-min 4 --n-max 14 --seed 7 --out " + out);
  ASSERT_EQ(res.code, 0);
  std::string text = slurp(out);
  std::vector<std::string> lines = lines_of(text);
  // 2 header lines + column line + 11 data rows + fit trailer.
  ASSERT_EQ(lines.size(), 15u);
  EXPECT_EQ(lines[2], "n,d,mode,r,F,stderr,n_samples,seed");
  // n=4 row carries the exact 1/27 plateau value.
  EXPECT_EQ(lines[3].rfind("4,2,sym,2,0.037037037037037", 0), 0u);
  json fit = trailer_json(text, "fit");
  EXPECT_EQ(fit["n_points"], 11);
  EXPECT_GT(fit["slope"].get<double>(), -3.0);
  EXPECT_LT(fit["slope"].get<double>(), 0.0);
  std::remove(out.c_str());
}

TEST(CliOtoc, MonteCarloRerunsAreByteIdentical) {
  const std::string out_a = temp_path("otoc_a.csv");
  const std::string out_b = temp_path("otoc_b.csv");
  const std::string flags =
      "otoc --mode sym --d 2 --n-min 4 --n-max 5 --samples 300 --seed 9 --threads 2";
  ASSERT_EQ(run_cli(flags + " --out " + out_a).code, 0);
  ASSERT_EQ(run_cli(flags + " --out " + out_b).code, 0);
  std::string text_a = slurp(out_a);
  ASSERT_FALSE(text_a.empty());
  EXPECT_EQ(text_a, slurp(out_b));
  // The config header records the resolved worker count and seed.
  EXPECT_NE(text_a.find("\"seed\":9"), std::string::npos);
  EXPECT_NE(text_a.find("\"threads\":2"), std::string::npos);
  std::remove(out_a.c_str());
  std::remove(out_b.c_str());
}

TEST(CliOtoc, EnvironmentOverridesThreadFlag) {
  CliResult res =
      run_cli("otoc --mode sym --d 2 --n-min 4 --n-max 5 --samples 100 --seed 3 "
              "--threads 2",
              "SCHURAND_THREADS=3");
  ASSERT_EQ(res.code, 0);
  EXPECT_NE(res.out.find("\"threads\":3"), std::string::npos);

  CliResult bad = run_cli("otoc --mode sym --d 2 --n-min 4 --n-max 5",
                          "SCHURAND_THREADS=zero");
  EXPECT_EQ(bad.code, 3);
}

TEST(CliCode, AverageModeMatchesBoundAtKOne) {
  CliResult res = run_cli("code --n 8 --k 1 --d 2 --mode avg");
  ASSERT_EQ(res.code, 0);
  std::vector<std::string> lines = lines_of(res.out);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[2], "n,k,d,mode,value,stderr,approx");
  // value column is the exact distance; at k=1 the closed-form bound is tight,
  // so it equals the paper_bound recorded in the summary trailer.
  std::stringstream row(lines[3]);
  std::string cell;
  std::vector<std::string> cells;
  while (std::getline(row, cell, ',')) cells.push_back(cell);
  ASSERT_EQ(cells.size(), 7u);
  double value = std::stod(cells[4]);
  json summary = trailer_json(res.out, "summary");
  EXPECT_NEAR(value, summary["paper_bound"].get<double>(), 1e-14);
}

TEST(CliCode, Fig2SweepDoublesSizesAndFitsSlope) {
  CliResult res = run_cli("code --k 3 --d 2 --mode fig2");
  ASSERT_EQ(res.code, 0);
  std::vector<std::string> lines = lines_of(res.out);
  ASSERT_EQ(lines.size(), 8u);  // header x2, columns, 4 rows (8..64), fit
  EXPECT_EQ(lines[3].rfind("8,3,2,fig2,", 0), 0u);
  EXPECT_EQ(lines[6].rfind("64,3,2,fig2,", 0), 0u);
  json fit = trailer_json(res.out, "fit");
  EXPECT_NEAR(fit["slope"].get<double>(), -1.0, 0.1);
}

TEST(CliCode, MutualInformationModeReportsBound) {
  CliResult res = run_cli("code --n 4 --k 1 --t 2 --d 2 --mode mi");
  ASSERT_EQ(res.code, 0);
  json summary = trailer_json(res.out, "summary");
  EXPECT_EQ(summary["t"], 2);
  EXPECT_EQ(summary["n_samples"], 0);
  std::vector<std::string> lines = lines_of(res.out);
  EXPECT_EQ(lines[3].rfind("4,1,2,mi,", 0), 0u);
}

TEST(CliQntk, TrajectoryRowsAndSummaryStatistics) {
  const std::string out = temp_path("qntk.csv");
  CliResult res = run_cli(
      "qntk --lambda 3,1 --d 2 --layers 2 --steps 10 --eta 0.0001 --seed 5 --out " +
      out);
  ASSERT_EQ(res.code, 0);
  std::string text = slurp(out);
  std::vector<std::string> lines = lines_of(text);
  // Rows t = 0..steps inclusive.
  ASSERT_EQ(lines.size(), 15u);
  EXPECT_EQ(lines[2], "t,eps,K");
  EXPECT_EQ(lines[3].rfind("0,", 0), 0u);
  EXPECT_EQ(lines[13].rfind("10,", 0), 0u);
  json summary = trailer_json(text, "summary");
  // Two layers of the (3,1) sector: average kernel 2 * 124/9.
  EXPECT_NEAR(summary["kbar"].get<double>(), 248.0 / 9.0, 1e-9);
  EXPECT_GT(summary["heuristic_kbar"].get<double>(), 0.0);
  EXPECT_FALSE(summary["diverged"].get<bool>());
  EXPECT_LT(summary["decay_rate"].get<double>(), 0.0);
  std::remove(out.c_str());

  // Identical flags, fresh file: byte-identical output.
  const std::string out2 = temp_path("qntk2.csv");
  ASSERT_EQ(run_cli("qntk --lambda 3,1 --d 2 --layers 2 --steps 10 --eta 0.0001 "
                    "--seed 5 --out " +
                    out2)
                .code,
            0);
  EXPECT_EQ(text, slurp(out2));
  std::remove(out2.c_str());
}

}  // namespace
