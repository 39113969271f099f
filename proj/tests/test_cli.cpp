// End-to-end checks of the command-line tool. argv[1] is the path to the
// specsum binary; every scenario shells out and inspects exit codes and JSON.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (ok) {
    std::printf("ok: %s\n", what.c_str());
  } else {
    ++failures;
    std::printf("FAILED: %s\n", what.c_str());
  }
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& cmd) {
  const std::string capture = "/tmp/specsum_cli_out.txt";
  const std::string full = cmd + " > " + capture + " 2> /tmp/specsum_cli_err.txt";
  const int raw = std::system(full.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream f(capture);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

std::string strip_elapsed(std::string s) {
  // remove the only run-dependent JSON line
  std::istringstream in(s);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find("\"elapsed_ms\"") == std::string::npos) out += line + "\n";
  return out;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  f << body;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-specsum>\n");
    return 2;
  }
  const std::string cli = argv[1];

  // --- estimate on a synthetic family: exit 0, accurate JSON ---
  const std::string ring_logdet = cli +
      " estimate logdet --family shifted-laplacian-ring --n 6 --kappa 4"
      " --eps 0.05 --delta 1e-3 --seed 7 --workers 1";
  RunResult a = run(ring_logdet);
  expect(a.code == 0, "ring logdet exits 0");
  {
    auto j = nlohmann::json::parse(a.out, nullptr, false);
    expect(!j.is_discarded(), "ring logdet emits parseable JSON");
    if (!j.is_discarded()) {
      const double v = j["value"].get<double>();
      expect(std::abs(v - (-0.57536414490356202)) <= 0.05, "logdet value within eps of exact");
      expect(j["eps"].get<double>() == 0.05, "eps echoed");
      expect(j["seed"].get<std::uint64_t>() == 7, "seed echoed");
      expect(j["method"].get<std::string>() == "taylor", "default method is taylor");
      expect(j["samples"].get<std::uint64_t>() > 0, "samples reported");
    }
  }

  // --- byte stability: identical runs agree apart from elapsed_ms ---
  RunResult a2 = run(ring_logdet);
  expect(strip_elapsed(a.out) == strip_elapsed(a2.out), "reruns are byte-identical");

  // --- worker invariance ---
  RunResult w8 = run(ring_logdet.substr(0, ring_logdet.size() - 1) + "8");
  expect(w8.code == 0, "workers=8 exits 0");
  expect(strip_elapsed(a.out) == strip_elapsed(w8.out), "workers 1 vs 8 byte-identical");

  // --- input errors exit 2 ---
  expect(run(cli + " estimate logdet --family shifted-laplacian-ring --n 6"
                   " --eps 0.05 --delta 1e-3").code == 2,
         "ring without --kappa exits 2");
  expect(run(cli + " estimate logdet --family no-such-family --n 4 --kappa 4").code == 2,
         "unknown family exits 2");
  expect(run(cli + " estimate logdet").code == 2, "missing source exits 2");
  expect(run(cli + " estimate frobenius --family shifted-laplacian-ring --n 4 --kappa 4").code == 2,
         "unknown target exits 2");
  expect(run(cli + " estimate logdet --family shifted-laplacian-ring --n 6 --kappa 4"
                   " --eps 1.5").code == 2,
         "eps out of range exits 2");

  // --- guard refusals exit 3 ---
  expect(run(cli + " estimate logdet --family shifted-laplacian-ring --n 6 --kappa 16"
                   " --eps 0.05 --delta 1e-3").code == 3,
         "ill-conditioned kappa=16 logdet exits 3");

  // --- broken promises exit 4 ---
  write_file("/tmp/specsum_cli_2I.herm", "HERM 4 4\n0 0 2 0\n1 1 2 0\n2 2 2 0\n3 3 2 0\n");
  expect(run(cli + " estimate logdet --file /tmp/specsum_cli_2I.herm --kappa 4"
                   " --eps 0.1 --delta 0.01").code == 4,
         "declared window broken by the data exits 4");

  // --- compare carries the dense reference ---
  RunResult cmp = run(cli +
      " compare trinv --family shifted-laplacian-ring --n 6 --kappa 4"
      " --eps 0.05 --delta 1e-3 --seed 3");
  expect(cmp.code == 0, "compare trinv exits 0");
  {
    auto j = nlohmann::json::parse(cmp.out, nullptr, false);
    expect(!j.is_discarded(), "compare emits parseable JSON");
    if (!j.is_discarded()) {
      expect(std::abs(j["exact"].get<double>() - 2.0) <= 1e-9, "compare exact = 2 for the ring");
      expect(j["abs_err"].get<double>() <= 0.05, "compare abs_err within eps");
      expect(j["pass"].get<bool>(), "compare pass flag true");
    }
  }

  // --- gadget subcommand: all checks pass on a Hadamard circuit ---
  write_file("/tmp/specsum_cli_h.gadget", "GADGET 1 1\nGATE H 1\n");
  RunResult gad = run(cli + " gadget --gadget /tmp/specsum_cli_h.gadget");
  expect(gad.code == 0, "gadget checks exit 0");
  {
    auto j = nlohmann::json::parse(gad.out, nullptr, false);
    expect(!j.is_discarded(), "gadget emits parseable JSON");
    if (!j.is_discarded()) {
      bool all = true;
      double predicted = 0.0;
      for (const auto& c : j["checks"]) {
        all = all && c["pass"].get<bool>();
        if (c["name"] == "determinant_lemma") predicted = c["predicted_re"].get<double>();
      }
      expect(all, "every gadget check passes");
      expect(j["pass"].get<bool>(), "gadget aggregate pass flag");
      expect(std::abs(predicted - 1.7071067811865475) <= 1e-9, "frozen Hadamard determinant");
    }
  }

  // --- estimates on the gadget product matrix ---
  RunResult gpow = run(cli +
      " estimate power --p 2 --gadget /tmp/specsum_cli_h.gadget --eps 0.1 --delta 0.01 --seed 5");
  expect(gpow.code == 0, "gadget power estimate exits 0");
  {
    auto j = nlohmann::json::parse(gpow.out, nullptr, false);
    if (!j.is_discarded()) {
      const double v = j["value"].get<double>();
      expect(v > 0.0 && v <= 1.0 + 1e-9, "gadget power value inside the unit window");
    }
  }

  // --- polytrace with a POLY file ---
  write_file("/tmp/specsum_cli_x2.poly", "POLY 2 0 1\n0\n0\n1\n");
  RunResult pt = run(cli +
      " estimate polytrace --poly /tmp/specsum_cli_x2.poly --family shifted-laplacian-ring"
      " --n 6 --kappa 4 --eps 0.05 --delta 1e-3 --seed 2");
  expect(pt.code == 0, "polytrace exits 0");
  {
    auto j = nlohmann::json::parse(pt.out, nullptr, false);
    if (!j.is_discarded()) {
      // mean of lambda^2 over the ring: c0^2 + 2 c1^2
      expect(std::abs(j["value"].get<double>() - 0.4609375) <= 0.05,
             "polytrace value within eps of the circulant closed form");
    }
  }

  // --- LOCALHAM estimate with the scale mapping ---
  write_file("/tmp/specsum_cli_d.localham",
             "LOCALHAM 1 1\nTERM 1 0 -\n0.5 0\n0 0\n0 0\n0.25 0\n");
  RunResult lh = run(cli +
      " estimate logdet --file /tmp/specsum_cli_d.localham --kappa 4"
      " --eps 0.05 --delta 1e-3 --seed 11");
  expect(lh.code == 0, "localham logdet exits 0");
  {
    auto j = nlohmann::json::parse(lh.out, nullptr, false);
    if (!j.is_discarded()) {
      const double want = 0.5 * (std::log(0.5) + std::log(0.25));
      expect(std::abs(j["value"].get<double>() - want) <= 0.05,
             "localham logdet within eps of the diagonal closed form");
    }
  }

  // --- --out writes the report to a file ---
  const std::string outfile = "/tmp/specsum_cli_report.json";
  std::remove(outfile.c_str());
  RunResult fo = run(ring_logdet + " --out " + outfile);
  expect(fo.code == 0, "--out exits 0");
  {
    std::ifstream f(outfile);
    std::stringstream ss;
    ss << f.rdbuf();
    expect(strip_elapsed(ss.str()) == strip_elapsed(a.out), "--out file matches stdout run");
  }

  // --- bench CSV shape ---
  RunResult ben = run(cli + " bench --eps 0.1 --delta 0.01 --seed 1");
  expect(ben.code == 0, "bench exits 0");
  {
    std::istringstream in(ben.out);
    std::string header;
    std::getline(in, header);
    expect(header ==
               "target,method,s,kappa_or_p,eps,degree,samples,queries,elapsed_ms,value,exact,abs_err",
           "bench CSV header");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) ++rows;
    expect(rows >= 6, "bench emits sweep rows");
  }

  std::printf("%s: %d failure(s)\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
