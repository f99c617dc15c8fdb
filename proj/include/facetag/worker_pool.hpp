// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace facetag {

// Fork-join worker pool. A call submits n index-addressed tasks, runs task 0
// on the calling thread, and returns once all n have completed. Multiple
// threads may fork-join on the same pool concurrently; tasks from different
// calls interleave in the queue without affecting each other's completion.
class WorkerPool {
public:
    explicit WorkerPool(unsigned threads = 0);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    unsigned thread_count() const;

    // Grow-only; no-op if the pool already has n threads.
    void ensure_threads(unsigned n);

    // Runs body(0..n-1), body(0) inline on the caller. Returns after all n
    // complete. The first exception thrown by any task is rethrown.
    void fork_join(std::size_t n, const std::function<void(std::size_t)>& body);

    // Process-wide pool, grown on demand. Reusing it across searches avoids
    // paying thread spawn cost once per frame.
    static WorkerPool& shared();

private:
    struct Sync;
    struct Task {
        const std::function<void(std::size_t)>* body;
        std::size_t index;
        Sync* sync;
    };

    void worker_loop();
    static void run_task(const Task& task);

    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<Task> queue_;
    std::vector<std::thread> threads_;
    bool stopping_ = false;
};

}  // namespace facetag
