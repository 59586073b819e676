// Drives the installed CLI binary through every subcommand and checks the
// documented exit-code contract. argv[1] is the binary, argv[2] the shipped
// configs directory.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

int g_failures = 0;

#define EXPECT(cond)                                                              \
  do {                                                                            \
    if (!(cond)) {                                                                \
      std::cerr << "FAILED at line " << __LINE__ << ": " #cond "\n";              \
      ++g_failures;                                                               \
    }                                                                             \
  } while (0)

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run(const std::string& command) {
  RunResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (!pipe) {
    std::cerr << "popen failed for: " << command << "\n";
    ++g_failures;
    return result;
  }
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) result.output += buf.data();
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return {};
  return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: cli_tests <ilwe-binary> <configs-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::string configs = argv[2];

  // ---- bound -------------------------------------------------------------
  {
    const RunResult r = run(cli + " bound --tau-a 1 --sigma-a 1 --tau-e 0 --k 1 --eta-conf 1");
    EXPECT(r.exit_code == 0);
    EXPECT(contains(r.output, "3669.5"));
    EXPECT(contains(r.output, "required m"));

    EXPECT(run(cli + " bound --tau-a 1 --sigma-a 0 --tau-e 0 --k 1").exit_code == 1);
    EXPECT(run(cli + " bound --tau-a 1 --sigma-a 1 --tau-e 0 --k 0").exit_code == 1);
    const RunResult base2 = run(cli + " bound --tau-a 1 --sigma-a 1 --tau-e 0 --k 1 --log-base 2");
    EXPECT(base2.exit_code == 0);
    EXPECT(contains(base2.output, "5294"));  // natural-log value scaled by 1/ln 2
  }

  // ---- simulate then attack ----------------------------------------------
  {
    const std::string samples = "cli_test_samples.txt";
    const std::string secret = "cli_test_secret.txt";
    const std::string sim_cmd = cli + " simulate --n 8 --k 1 --rho 3 --gamma 0 --beta -6 --eta 1 --m 100 --out " +
                                samples + " --secret-out " + secret + " --seed 5";
    const RunResult sim = run(sim_cmd);
    EXPECT(sim.exit_code == 0);
    EXPECT(contains(sim.output, "rejection rate: 0.00%"));

    // byte-identical on the same seed
    const std::string samples2 = "cli_test_samples2.txt";
    const RunResult sim2 = run(cli + " simulate --n 8 --k 1 --rho 3 --gamma 0 --beta -6 --eta 1 --m 100 --out " +
                               samples2 + " --secret-out cli_test_secret2.txt --seed 5");
    EXPECT(sim2.exit_code == 0);
    EXPECT(slurp(samples) == slurp(samples2));
    EXPECT(!slurp(samples).empty());

    const RunResult atk = run(cli + " attack --samples " + samples + " --n 8 --k 1 --secret " + secret);
    EXPECT(atk.exit_code == 0);
    EXPECT(contains(atk.output, "l1=0"));

    const RunResult both = run(cli + " attack --samples " + samples + " --n 8 --k 1 --method both --secret " + secret);
    EXPECT(both.exit_code == 0);
    EXPECT(contains(both.output, "lsm: "));
    EXPECT(contains(both.output, "svd: "));

    // missing the shape flags is a usage error
    EXPECT(run(cli + " attack --samples " + samples).exit_code == 1);
    std::remove(samples.c_str());
    std::remove(samples2.c_str());
    std::remove(secret.c_str());
    std::remove("cli_test_secret2.txt");
  }

  // ---- full-scale round trip: simulate at m = 1e5, replay, recover ---------
  {
    const std::string samples = "cli_test_big_samples.txt";
    const std::string secret = "cli_test_big_secret.txt";
    const RunResult sim = run(cli +
                              " simulate --n 100 --k 1 --rho 39 --gamma 256 --eta 1"
                              " --y-dist subgaussian --alpha 29 --m 100000 --out " +
                              samples + " --secret-out " + secret + " --seed 3");
    EXPECT(sim.exit_code == 0);
    const RunResult atk =
        run(cli + " attack --samples " + samples + " --n 100 --k 1 --method lsm --secret " + secret);
    EXPECT(atk.exit_code == 0);
    EXPECT(contains(atk.output, "l1=0 linf=0 weight_diff=0"));
    std::remove(samples.c_str());
    std::remove(secret.c_str());
  }

  // ---- attack error paths -------------------------------------------------
  {
    // rho = 0 gives all-zero c: LSM hits a singular system, SVD a degenerate
    // last component; both are computation errors (exit 2) with named errors.
    const std::string samples = "cli_test_degenerate.txt";
    const RunResult sim = run(cli + " simulate --n 4 --k 1 --rho 0 --gamma 3 --beta -2 --eta 0" +
                              std::string(" --secret-mode uniform_box --m 10 --out ") + samples +
                              " --secret-out cli_test_degsecret.txt");
    EXPECT(sim.exit_code == 0);
    const RunResult svd = run(cli + " attack --samples " + samples + " --n 4 --k 1 --method svd");
    EXPECT(svd.exit_code == 2);
    EXPECT(contains(svd.output, "DegenerateLastComponent"));
    const RunResult lsm = run(cli + " attack --samples " + samples + " --n 4 --k 1 --method lsm");
    EXPECT(lsm.exit_code == 2);
    EXPECT(contains(lsm.output, "SingularOrIndefinite"));
    std::remove(samples.c_str());
    std::remove("cli_test_degsecret.txt");

    EXPECT(run(cli + " attack --instance no_such_instance.txt").exit_code == 1);
    std::ofstream bad("cli_test_bad_instance.txt");
    bad << "not an instance\n";
    bad.close();
    const RunResult badr = run(cli + " attack --instance cli_test_bad_instance.txt");
    EXPECT(badr.exit_code == 1);
    std::remove("cli_test_bad_instance.txt");
  }

  // ---- attack on an instance file ------------------------------------------
  {
    std::ofstream inst("cli_test_instance.txt");
    inst << "ilwe 3 3\n1 0 0\n0 1 0\n0 0 1\nb\n5\n-7\n2\n";
    inst.close();
    const RunResult atk = run(cli + " attack --instance cli_test_instance.txt --method both");
    EXPECT(atk.exit_code == 0);
    EXPECT(contains(atk.output, "lsm: 5 -7 2"));
    EXPECT(contains(atk.output, "svd: 5 -7 2"));
    std::remove("cli_test_instance.txt");
  }

  // ---- experiment -----------------------------------------------------------
  {
    const std::string report = "cli_test_report.csv";
    const RunResult exp =
        run(cli + " experiment --config " + configs + "/toy.conf --out " + report + " --format csv");
    EXPECT(exp.exit_code == 0);
    EXPECT(contains(exp.output, "l1_best="));
    const std::string csv = slurp(report);
    EXPECT(contains(csv, "n,rho,gamma_minus_beta,alpha,k,eta,m,l1_best,rejection_rate,attack,discarded_trials"));

    const std::string report2 = "cli_test_report2.csv";
    const RunResult exp2 =
        run(cli + " experiment --config " + configs + "/toy.conf --out " + report2 + " --format csv");
    EXPECT(exp2.exit_code == 0);
    EXPECT(slurp(report2) == csv);  // same config, same seed: byte-identical

    const RunResult table =
        run(cli + " experiment --config " + configs + "/toy.conf --out cli_test_report.txt --format table");
    EXPECT(table.exit_code == 0);
    EXPECT(contains(slurp("cli_test_report.txt"), "%"));

    const RunResult missing = run(cli + " experiment --config no_such_config.conf --out " + report);
    EXPECT(missing.exit_code == 1);
    EXPECT(contains(missing.output, "no_such_config.conf"));

    std::ofstream bad("cli_test_bad.conf");
    bad << "n = 4\nk = \n";
    bad.close();
    EXPECT(run(cli + " experiment --config cli_test_bad.conf --out " + report).exit_code == 1);
    std::remove("cli_test_bad.conf");

    // an unreachable rejection window is a computation error, exit 2
    std::ofstream tune("cli_test_tune.conf");
    tune << "n = 1\nk = 1\nrho = 0\neta = 0\ngamma = 2\nbeta = auto\ny_dist = uniform\n"
         << "secret_mode = uniform_box\nm_list = 10\ntarget_reject = 0.5\nreject_window = 0.49, 0.51\n";
    tune.close();
    const RunResult tuned = run(cli + " experiment --config cli_test_tune.conf --out " + report);
    EXPECT(tuned.exit_code == 2);
    EXPECT(contains(tuned.output, "TuneFailed"));
    std::remove("cli_test_tune.conf");
    std::remove(report.c_str());
    std::remove(report2.c_str());
    std::remove("cli_test_report.txt");
  }

  // ---- usage ----------------------------------------------------------------
  EXPECT(run(cli).exit_code == 1);                  // missing subcommand
  EXPECT(run(cli + " --help").exit_code == 0);      // help is success
  EXPECT(run(cli + " bound --tau-a 1").exit_code == 1);

  if (g_failures == 0) {
    std::cout << "cli_tests: all checks passed\n";
    return 0;
  }
  std::cerr << "cli_tests: " << g_failures << " check(s) failed\n";
  return 1;
}
