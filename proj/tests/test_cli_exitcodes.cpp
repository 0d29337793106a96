// Exit-code contract of the CLI: 0 clean, 2 violation/witness, 1 error.
// Takes the path of the qig binary as argv[1].

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

int run(const std::string& cmd) {
    const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void expect_contains(const std::string& what, const std::string& haystack,
                     const std::string& needle) {
    if (haystack.find(needle) == std::string::npos) {
        std::cerr << "FAIL " << what << ": missing '" << needle << "'\n";
        ++failures;
    } else {
        std::cout << "ok   " << what << "\n";
    }
}

void expect(const std::string& what, int got, int want) {
    if (got != want) {
        std::cerr << "FAIL " << what << ": exit " << got << ", expected " << want << "\n";
        ++failures;
    } else {
        std::cout << "ok   " << what << " (exit " << got << ")\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli_exitcodes <path-to-qig>\n";
        return 1;
    }
    const std::string qig = argv[1];
    const std::string fast = " --samples 300 --oracle-grid 400 --oracle-refine 15";

    expect("certify clean CPTP map",
           run(qig + " certify --map catalog:depolarizing?p=0.5" + fast), 0);
    expect("certify non-positive map",
           run(qig + " certify --map catalog:depolarizing?p=1.5" + fast), 2);
    expect("certify PTP-not-CP map", run(qig + " certify --map catalog:transpose" + fast), 2);
    expect("witness search finds expansion",
           run(qig + " witness --map catalog:depolarizing?p=1.5" + fast), 2);
    expect("witness search on CP map",
           run(qig + " witness --map catalog:depolarizing?p=0.5" + fast), 0);
    expect("contract-test clean",
           run(qig + " contract-test --map catalog:amplitude_damping?gamma=0.3" + fast), 0);
    expect("classical witness",
           run(qig + " classical --map catalog:perturbed_stochastic?n=3" + fast), 2);
    expect("classical clean",
           run(qig + " classical --map catalog:random_stochastic?n=3" + fast), 0);

    {
        std::ofstream out("/tmp/qig_cli_boundary.json");
        out << "[[[1,0],[0,0]],[[0,0],[0,0]]]";
    }
    {
        std::ofstream out("/tmp/qig_cli_tangent.json");
        out << "[[[1,0],[0,0]],[[0,0],[-1,0]]]";
    }
    expect("metric at a boundary state is an error",
           run(qig + " metric --state /tmp/qig_cli_boundary.json --a /tmp/qig_cli_tangent.json"),
           1);
    expect("malformed map file is an error", run(qig + " certify --map /nonexistent.json"), 1);
    expect("unknown f name is an error",
           run(qig + " certify --map catalog:identity --f bures" + fast), 1);
    expect("catalog listing", run(qig + " catalog"), 0);

    expect("sweep over the depolarizing family",
           run(qig + " sweep --family depolarizing --values -1.2,-0.7,0,0.5,1.2 --format csv"
               " --out /tmp/qig_cli_sweep.csv" + fast),
           0);
    const std::string sweep = slurp("/tmp/qig_cli_sweep.csv");
    // phase structure from the closed-form thresholds |p| <= 1 and p in [-1/3, 1]
    expect_contains("sweep row p=-1.2", sweep, "-1.2,NonPositive");
    expect_contains("sweep row p=-0.7", sweep, "-0.7,PTP-not-CP");
    expect_contains("sweep row p=0", sweep, "0,CPTP");
    expect_contains("sweep row p=0.5", sweep, "0.5,CPTP");
    expect_contains("sweep row p=1.2", sweep, "1.2,NonPositive");

    // payload replayability: identical config, bit-identical payload
    expect("certify run A",
           run(qig + " certify --map catalog:transpose --out /tmp/qig_cli_a.json" + fast), 2);
    expect("certify run B",
           run(qig + " certify --map catalog:transpose --out /tmp/qig_cli_b.json" + fast), 2);
    const std::string a = slurp("/tmp/qig_cli_a.json");
    const std::string b = slurp("/tmp/qig_cli_b.json");
    const auto payload = [](const std::string& s) {
        const auto from = s.find("\"payload\"");
        const auto to = s.find("\"tool\"");
        return s.substr(from, to - from);
    };
    if (payload(a) != payload(b)) {
        std::cerr << "FAIL certify payload is not replayable bit-for-bit\n";
        ++failures;
    } else {
        std::cout << "ok   certify payload replays bit-for-bit\n";
    }

    if (failures == 0) {
        std::cout << "all exit-code checks passed\n";
        return 0;
    }
    return 1;
}
