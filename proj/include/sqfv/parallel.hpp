#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "sqfv/common.hpp"

namespace sqfv {

// Worker count default: SQFV_WORKERS env var, else hardware concurrency.
inline unsigned default_workers() {
    if (const char* env = std::getenv("SQFV_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? std::min(hc, 16u) : 1u;
}

// Deterministic fan-out: jobs 0..count-1 run on `workers` threads, results are
// committed strictly in index order.  Workers share nothing; `commit` is the
// only serial stage, so output is byte-identical for any worker count.
template <class Result, class Work, class Commit>
void run_indexed(u64 count, unsigned workers, Work work, Commit commit) {
    if (workers == 0) workers = 1;
    if (count == 0) return;
    if (workers == 1 || count == 1) {
        for (u64 i = 0; i < count; ++i) commit(i, work(i));
        return;
    }
    std::atomic<u64> next{0};
    std::mutex mu;
    std::map<u64, Result> done;
    u64 commit_next = 0;
    std::exception_ptr failure;
    auto body = [&]() {
        while (true) {
            u64 i = next.fetch_add(1);
            if (i >= count) return;
            {
                std::lock_guard<std::mutex> lk(mu);
                if (failure) return;
            }
            try {
                Result r = work(i);
                std::lock_guard<std::mutex> lk(mu);
                done.emplace(i, std::move(r));
                while (true) {
                    auto it = done.find(commit_next);
                    if (it == done.end()) break;
                    commit(commit_next, std::move(it->second));
                    done.erase(it);
                    ++commit_next;
                }
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace sqfv
