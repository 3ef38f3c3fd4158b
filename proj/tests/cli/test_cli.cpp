// Black-box tests of the grassfq binary: schema, examples, determinism, exit codes.

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using Json = nlohmann::ordered_json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(GRASSFQ_CLI) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Json run_json(const std::string& args) {
  const Outcome r = run(args);
  EXPECT_EQ(r.code, 0) << args;
  return Json::parse(r.out);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Top-level keys in order, strings for every exact column, numbers or null in *_approx columns.
void check_schema(const Json& doc, const std::string& command) {
  ASSERT_TRUE(doc.is_object());
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  std::vector<std::string> want{"q", "n", "command", "seed", "rows"};
  EXPECT_EQ(keys, want);
  EXPECT_EQ(doc["command"], command);
  EXPECT_TRUE(doc["q"].is_string());
  EXPECT_TRUE(doc["seed"].is_string());
  EXPECT_TRUE(doc["n"].is_string() || doc["n"].is_null());
  ASSERT_TRUE(doc["rows"].is_array());
  ASSERT_FALSE(doc["rows"].empty());
  const Json& first = doc["rows"][0];
  for (const Json& row : doc["rows"]) {
    ASSERT_EQ(row.size(), first.size());
    for (auto it = row.begin(); it != row.end(); ++it) {
      EXPECT_TRUE(first.contains(it.key()));
      if (ends_with(it.key(), "_approx"))
        EXPECT_TRUE(it->is_number() || it->is_null()) << it.key();
      else
        EXPECT_TRUE(it->is_string()) << it.key();
    }
  }
}

const Json* find_row(const Json& doc, const std::string& key, const std::string& value, const std::string& key2 = "",
                     const std::string& value2 = "") {
  for (const Json& row : doc["rows"])
    if (row[key] == value && (key2.empty() || row[key2] == value2)) return &row;
  return nullptr;
}

}  // namespace

TEST(Cli, CountExamples) {
  Json doc = run_json("count --q 2 --n 2 --verify-by-enumeration");
  check_schema(doc, "count");
  EXPECT_EQ(doc["q"], "2");
  EXPECT_EQ(doc["n"], "2");
  EXPECT_EQ(doc["seed"], "0");
  EXPECT_EQ((*find_row(doc, "quantity", "grassmannian"))["value"], "35");
  EXPECT_EQ((*find_row(doc, "quantity", "grassmannian"))["enumerated"], "35");
  const char* orbits[] = {"16", "18", "1"};
  for (int k = 0; k < 3; ++k) {
    const Json* row = find_row(doc, "quantity", "orbit", "k", std::to_string(k));
    ASSERT_NE(row, nullptr);
    EXPECT_EQ((*row)["value"], orbits[k]);
    EXPECT_EQ((*row)["enumerated"], orbits[k]);
  }
  EXPECT_EQ((*find_row(doc, "quantity", "gl_n"))["value"], "6");

  doc = run_json("count --q 2 --n 1");
  EXPECT_EQ((*find_row(doc, "quantity", "grassmannian"))["value"], "3");
  EXPECT_EQ((*find_row(doc, "quantity", "orbit", "k", "0"))["value"], "2");
  EXPECT_EQ((*find_row(doc, "quantity", "orbit", "k", "1"))["value"], "1");

  doc = run_json("count --q 2 --n 0");
  EXPECT_EQ((*find_row(doc, "quantity", "grassmannian"))["value"], "1");
}

TEST(Cli, CountLargeStaysExact) {
  // #Gr_16^8 over F_2 does not fit in 64 bits.
  const Json doc = run_json("count --q 2 --n 8");
  const std::string v = (*find_row(doc, "quantity", "grassmannian"))["value"];
  EXPECT_GT(v.size(), 19u);
  EXPECT_EQ(v, "63379954960524853651");
}

TEST(Cli, MeasureExamples) {
  const Json doc = run_json("measure --q 2 --kmax 12");
  check_schema(doc, "measure");
  EXPECT_TRUE(doc["n"].is_null());
  EXPECT_EQ(doc["rows"][0]["mu_orbit"], "1");
  EXPECT_EQ(doc["rows"][1]["mu_orbit"], "2");
  EXPECT_EQ(doc["rows"][2]["mu_orbit"], "4/9");
  EXPECT_LT(doc["rows"][12]["gap_approx"].get<double>(), 1e-9);
  EXPECT_EQ(run_json("measure --q 5 --kmax 0")["rows"][0]["mu_orbit"], "1");
}

TEST(Cli, SpectrumExamples) {
  Json doc = run_json("spectrum --q 2 --n 4");
  check_schema(doc, "spectrum");
  ASSERT_EQ(doc["rows"].size(), 5u);
  for (const Json& row : doc["rows"]) {
    EXPECT_EQ(row["residual_max"], "0");
    EXPECT_EQ(row["residuals_zero"], "true");
  }

  doc = run_json("spectrum --q 2 --infinite --jmax 8 --K 30");
  check_schema(doc, "spectrum");
  ASSERT_EQ(doc["rows"].size(), 9u);
  const char* ev[] = {"1", "1/2", "1/4", "1/8", "1/16", "1/32", "1/64", "1/128", "1/256"};
  for (int j = 0; j <= 8; ++j) {
    EXPECT_EQ(doc["rows"][j]["eigenvalue"], ev[j]);
    EXPECT_EQ(doc["rows"][j]["residuals_zero"], "true");
  }
}

TEST(Cli, EnumerateListsEverySubspace) {
  Json doc = run_json("enumerate --q 2 --n 2");
  check_schema(doc, "enumerate");
  EXPECT_EQ(doc["rows"].size(), 35u);
  doc = run_json("enumerate --q 2 --n 2 --k 1");
  EXPECT_EQ(doc["rows"].size(), 18u);
  for (const Json& row : doc["rows"]) EXPECT_EQ(row["orbit_k"], "1");
}

TEST(Cli, SampleAndWalk) {
  Json doc = run_json("sample --q 2 --n 3 --samples 2000 --seed 5");
  check_schema(doc, "sample");
  std::uint64_t total = 0;
  for (const Json& row : doc["rows"]) total += std::stoull(row["count"].get<std::string>());
  EXPECT_EQ(total, 2000u);

  doc = run_json("walk --q 2 --steps 5000 --seed 7");
  check_schema(doc, "walk");
  total = 0;
  for (const Json& row : doc["rows"]) total += std::stoull(row["visits"].get<std::string>());
  EXPECT_EQ(total, 5001u);
}

TEST(Cli, VerifyAllPasses) {
  const Outcome r = run("verify --suite all --q 2");
  EXPECT_EQ(r.code, 0);
  const Json doc = Json::parse(r.out);
  check_schema(doc, "verify");
  for (const Json& row : doc["rows"]) EXPECT_EQ(row["status"], "PASS") << row["check"];
  EXPECT_EQ(run("verify --suite gf").code, 0);
}

TEST(Cli, Determinism) {
  const auto dir = std::filesystem::temp_directory_path();
  for (const std::string fmt : {"json", "csv"}) {
    const auto a = dir / ("grassfq_a." + fmt), b = dir / ("grassfq_b." + fmt);
    const std::string args = "sample --q 2 --n 4 --samples 20000 --seed 42 --format " + fmt + " --out ";
    ASSERT_EQ(run(args + a.string()).code, 0);
    ASSERT_EQ(run(args + b.string()).code, 0);
    EXPECT_FALSE(slurp(a).empty());
    EXPECT_EQ(slurp(a), slurp(b));
    const std::string w = "walk --q 3 --steps 20000 --seed 9 --format " + fmt + " --out ";
    ASSERT_EQ(run(w + a.string()).code, 0);
    ASSERT_EQ(run(w + b.string()).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
  }
  EXPECT_NE(run("sample --q 2 --n 4 --samples 2000 --seed 1").out, run("sample --q 2 --n 4 --samples 2000 --seed 2").out);
}

TEST(Cli, CsvMirrorsJsonColumns) {
  const Json doc = run_json("measure --q 3 --kmax 4");
  const Outcome csv = run("measure --q 3 --kmax 4 --format csv");
  ASSERT_EQ(csv.code, 0);
  std::istringstream is(csv.out);
  std::string header;
  std::getline(is, header);
  std::string expect;
  for (auto it = doc["rows"][0].begin(); it != doc["rows"][0].end(); ++it) expect += (expect.empty() ? "" : ",") + it.key();
  EXPECT_EQ(header, expect);
  std::size_t lines = 0;
  for (std::string line; std::getline(is, line);) ++lines;
  EXPECT_EQ(lines, doc["rows"].size());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("count --bogus").code, 2);
  EXPECT_EQ(run("count --q 6").code, 2);       // not a prime power
  EXPECT_EQ(run("count --q 131072").code, 2);  // beyond the supported range
  EXPECT_EQ(run("verify --suite nosuch").code, 2);
  EXPECT_EQ(run("count --format xml").code, 2);
  EXPECT_EQ(run("enumerate --q 2 --n 2 --k 3").code, 2);
  EXPECT_EQ(run("enumerate --q 2 --n 12").code, 2);  // TooLarge
  EXPECT_EQ(run("count --q 2 --n 2 --out /nonexistent/dir/x.json").code, 2);
}
