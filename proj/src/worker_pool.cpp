// SPDX-License-Identifier: Apache-2.0
#include "facetag/worker_pool.hpp"

#include <exception>

namespace facetag {

// Per-fork-join completion state, lives on the caller's stack.
struct WorkerPool::Sync {
    std::mutex m;
    std::condition_variable cv;
    std::size_t remaining = 0;
    std::exception_ptr first_error;

    void task_done(std::exception_ptr err) {
        std::unique_lock lock(m);
        if (err && !first_error) first_error = std::move(err);
        if (--remaining == 0) cv.notify_all();
    }

    void wait() {
        std::unique_lock lock(m);
        cv.wait(lock, [&] { return remaining == 0; });
    }
};

WorkerPool::WorkerPool(unsigned threads) {
    ensure_threads(threads);
}

WorkerPool::~WorkerPool() {
    {
        std::unique_lock lock(mutex_);
        stopping_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
}

unsigned WorkerPool::thread_count() const {
    std::unique_lock lock(mutex_);
    return static_cast<unsigned>(threads_.size());
}

void WorkerPool::ensure_threads(unsigned n) {
    std::unique_lock lock(mutex_);
    while (threads_.size() < n) {
        threads_.emplace_back([this] { worker_loop(); });
    }
}

void WorkerPool::run_task(const Task& task) {
    std::exception_ptr err;
    try {
        (*task.body)(task.index);
    } catch (...) {
        err = std::current_exception();
    }
    task.sync->task_done(std::move(err));
}

void WorkerPool::worker_loop() {
    for (;;) {
        Task task;
        {
            std::unique_lock lock(mutex_);
            cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
            if (queue_.empty()) return;  // stopping
            task = queue_.front();
            queue_.pop_front();
        }
        run_task(task);
    }
}

void WorkerPool::fork_join(std::size_t n, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    if (n == 1) {
        body(0);
        return;
    }

    ensure_threads(1);  // an empty pool would never drain the queue

    Sync sync;
    sync.remaining = n - 1;
    {
        std::unique_lock lock(mutex_);
        for (std::size_t i = 1; i < n; ++i) queue_.push_back(Task{&body, i, &sync});
    }
    cv_.notify_all();

    // Queued tasks reference stack state; the wait must happen even if the
    // caller's own slice throws.
    std::exception_ptr caller_error;
    try {
        body(0);
    } catch (...) {
        caller_error = std::current_exception();
    }
    sync.wait();
    if (caller_error) std::rethrow_exception(caller_error);
    if (sync.first_error) std::rethrow_exception(sync.first_error);
}

WorkerPool& WorkerPool::shared() {
    static WorkerPool pool;
    return pool;
}

}  // namespace facetag
