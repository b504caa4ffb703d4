#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nilsphere {

using cd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Threaded loop over [0, n). Thread count comes from NILSPHERE_THREADS (or
// hardware concurrency), overridable per call. Work is split into contiguous
// blocks so results are independent of the thread count.
int default_thread_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  int threads = 0);

// splitmix64-seeded xoshiro256++; uniform doubles are derived from the raw
// 64-bit stream so sequences are identical across platforms and stdlibs.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull);
    std::uint64_t next_u64();
    double uniform();                      // [0, 1)
    double uniform(double a, double b);    // [a, b)
    double normal();                       // Box-Muller from the uniform stream
    int uniform_int(int lo, int hi);       // inclusive bounds

private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// least squares z ~ a*x + b*y + c
struct PlaneFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double max_residual = 0.0;
};
PlaneFit fit_plane(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& z);

// 12 significant digits, locale-independent; the byte-stable format used by
// every CSV the tools emit.
std::string format_sig(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    void add_row(const std::vector<double>& vals);
    void add_row(std::vector<std::string> cells);
    void write(const std::string& path) const;
    std::string to_string() const;
};

double log2_safe(double v);

}  // namespace nilsphere
