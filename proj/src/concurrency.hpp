#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace feedpipe {

/// Runs work(i) for i in [0, n) on up to max_workers threads, never running
/// two items with the same key at once. Callers collect results into
/// index-addressed slots, so output order is independent of scheduling.
inline void for_each_key_limited(std::size_t n, int max_workers,
                                 const std::function<std::string(std::size_t)>& key_of,
                                 const std::function<void(std::size_t)>& work) {
    if (n == 0)
        return;
    if (max_workers <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i)
            work(i);
        return;
    }

    std::mutex mu;
    std::condition_variable cv;
    std::vector<bool> claimed(n, false);
    std::set<std::string> busy;
    std::size_t remaining = n;

    auto worker = [&] {
        std::unique_lock<std::mutex> lock(mu);
        while (remaining > 0) {
            std::size_t pick = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (!claimed[i] && busy.count(key_of(i)) == 0) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {
                bool any_unclaimed = false;
                for (std::size_t i = 0; i < n; ++i)
                    if (!claimed[i])
                        any_unclaimed = true;
                if (!any_unclaimed)
                    return;
                cv.wait(lock);
                continue;
            }
            claimed[pick] = true;
            std::string key = key_of(pick);
            busy.insert(key);
            lock.unlock();
            work(pick);
            lock.lock();
            busy.erase(key);
            --remaining;
            cv.notify_all();
        }
    };

    std::vector<std::thread> threads;
    int count = std::min<int>(max_workers, static_cast<int>(n));
    threads.reserve(count);
    for (int t = 0; t < count; ++t)
        threads.emplace_back(worker);
    for (auto& t : threads)
        t.join();
}

}  // namespace feedpipe
