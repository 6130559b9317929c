#ifndef RFSO_PARALLEL_HPP
#define RFSO_PARALLEL_HPP

#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

namespace rfso::par {

/// Worker count: RFSO_THREADS when set, hardware concurrency otherwise.
inline unsigned default_thread_count() {
    if (const char* env = std::getenv("RFSO_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Run fn(i) for i in [0, n). Tasks must be independent; results are keyed
/// by index so the schedule cannot affect output.
template <class Fn>
void for_each_index(std::size_t n, Fn&& fn, unsigned threads = default_thread_count()) {
    if (n == 0) return;
    if (threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::future<void>> futs;
    futs.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        }));
    }
    for (auto& f : futs) f.get();
}

}  // namespace rfso::par

#endif
