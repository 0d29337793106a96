// Compares the serial reference path against the OpenMP path for the
// sampling kernels. Build and run manually:
//   cmake --build build --target qig_bench && ./build/bench/qig_bench [n]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "qig/certifier.hpp"

using namespace qig;

namespace {

template <typename Fn>
double time_ms(Fn&& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (ms < best) {
            best = ms;
        }
    }
    return best;
}

void row(const char* name, double serial_ms, double omp_ms) {
    std::printf("%-34s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms, omp_ms,
                serial_ms / omp_ms);
}

}  // namespace

int main(int argc, char** argv) {
    const long n = argc > 1 ? std::atol(argv[1]) : 20000;
#ifdef _OPENMP
    std::printf("OpenMP enabled, %d thread(s); n = %ld\n", omp_get_max_threads(), n);
#else
    std::printf("built without OpenMP; both columns run the serial path; n = %ld\n", n);
#endif
    std::printf("%-34s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    const LinearMapRep cptp = random_cptp_map(3, 3, 42);
    CertConfig c;
    c.n_samples = n;
    c.exec = Exec::Serial;
    CertConfig cp = c;
    cp.exec = Exec::OpenMp;
    row("sample_contraction_test d=3",
        time_ms([&] { sample_contraction_test(cptp, c); }),
        time_ms([&] { sample_contraction_test(cptp, cp); }));

    const LinearMapRep depol = depolarizing_map(2, 1.5);
    const LinearMapRep lifted = tensor_identity(transpose_map(3), 3);
    row("positivity_oracle d=2",
        time_ms([&] { positivity_oracle(depol, static_cast<int>(n), 30, 5, Exec::Serial); }),
        time_ms([&] { positivity_oracle(depol, static_cast<int>(n), 30, 5, Exec::OpenMp); }));
    row("positivity_oracle lifted d=9",
        time_ms([&] { positivity_oracle(lifted, static_cast<int>(n) / 4, 30, 5, Exec::Serial); }),
        time_ms([&] { positivity_oracle(lifted, static_cast<int>(n) / 4, 30, 5, Exec::OpenMp); }));

    const ContrastGenerator g = ContrastGenerator::neg_log();
    CertConfig cc = c;
    cc.n_samples = n / 4;
    CertConfig ccp = cc;
    ccp.exec = Exec::OpenMp;
    row("contrast_contraction_test d=2",
        time_ms([&] { contrast_contraction_test(depolarizing_map(2, 0.5), g, cc); }),
        time_ms([&] { contrast_contraction_test(depolarizing_map(2, 0.5), g, ccp); }));
    return 0;
}
