#pragma once

#include <chrono>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tuffley {

/// Thrown when a configured resource guard (size cap, DP cap, time budget)
/// stops a computation. Maps to CLI exit code 3.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an internal cross-validation fails (indicates a bug, not bad
/// input). Maps to CLI exit code 1.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

/// How the data-parallel kernels run. Every kernel has a serial reference
/// implementation used for testing; `parallel` selects the OpenMP lane.
struct ExecPolicy {
    bool parallel = true;
    int threads = 0;  // 0 = runtime default

    static ExecPolicy serial() { return {false, 1}; }
};

/// Resource guards shared by the poset build and the shellability search.
struct Caps {
    int max_n = 6;            // largest ground set for full poset builds
    int dp_coatom_cap = 22;   // subset DP refuses more coatoms than this
    double time_budget_seconds = 0.0;  // 0 = unlimited

    static Caps from_env() {
        Caps c;
        if (const char* s = std::getenv("TUFFLEY_MAX_N")) {
            c.max_n = std::atoi(s);
        }
        return c;
    }
};

/// Cooperative deadline checked between DP levels and DFS nodes.
class Deadline {
public:
    Deadline() = default;
    explicit Deadline(double seconds) {
        if (seconds > 0) {
            armed_ = true;
            end_ = std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(seconds));
        }
    }

    bool expired() const {
        return armed_ && std::chrono::steady_clock::now() > end_;
    }

    void check(const std::string& where) const {
        if (expired()) {
            throw ResourceError("time budget exceeded during " + where);
        }
    }

private:
    bool armed_ = false;
    std::chrono::steady_clock::time_point end_{};
};

}  // namespace tuffley
