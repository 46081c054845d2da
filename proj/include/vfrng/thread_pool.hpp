// Copyright 2026 The vfrng Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VFRNG_THREAD_POOL_HPP
#define VFRNG_THREAD_POOL_HPP

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace vfrng {

// Minimal fork-join pool. The calling thread always participates, so a pool
// built for `workers` parallelism owns workers - 1 helper threads and a
// worker count of one runs everything inline with no synchronization.
// Work items are claimed from a shared counter, which keeps the item order
// irrelevant to the result as long as items write to disjoint slots.
class ThreadPool {
 public:
  explicit ThreadPool(unsigned workers) {
    const unsigned helpers = workers > 1 ? workers - 1 : 0;
    threads_.reserve(helpers);
    for (unsigned i = 0; i < helpers; ++i) {
      threads_.emplace_back([this] { helper_loop(); });
    }
  }

  ~ThreadPool() {
    {
      std::unique_lock<std::mutex> lock(mutex_);
      stop_ = true;
    }
    work_ready_.notify_all();
    for (auto& t : threads_) t.join();
  }

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  unsigned parallelism() const {
    return static_cast<unsigned>(threads_.size()) + 1;
  }

  // Runs fn(0) .. fn(count - 1), returning once all items finished.
  // The first exception thrown by any item is rethrown here.
  void parallel_for(std::size_t count,
                    const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    if (threads_.empty()) {
      for (std::size_t i = 0; i < count; ++i) fn(i);
      return;
    }
    {
      std::unique_lock<std::mutex> lock(mutex_);
      task_ = &fn;
      count_ = count;
      next_.store(0, std::memory_order_relaxed);
      running_ = static_cast<unsigned>(threads_.size());
      ++generation_;
    }
    work_ready_.notify_all();
    run_items(fn);
    {
      std::unique_lock<std::mutex> lock(mutex_);
      work_done_.wait(lock, [this] { return running_ == 0; });
      task_ = nullptr;
    }
    if (error_) {
      std::exception_ptr e = error_;
      error_ = nullptr;
      std::rethrow_exception(e);
    }
  }

 private:
  void run_items(const std::function<void(std::size_t)>& fn) {
    for (;;) {
      const std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
      if (i >= count_) break;
      try {
        fn(i);
      } catch (...) {
        std::unique_lock<std::mutex> lock(mutex_);
        if (!error_) error_ = std::current_exception();
      }
    }
  }

  void helper_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      const std::function<void(std::size_t)>* task;
      {
        std::unique_lock<std::mutex> lock(mutex_);
        work_ready_.wait(lock,
                         [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
        task = task_;
      }
      run_items(*task);
      {
        std::unique_lock<std::mutex> lock(mutex_);
        if (--running_ == 0) work_done_.notify_all();
      }
    }
  }

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable work_ready_;
  std::condition_variable work_done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t count_ = 0;
  std::atomic<std::size_t> next_{0};
  unsigned running_ = 0;
  std::uint64_t generation_ = 0;
  std::exception_ptr error_;
  bool stop_ = false;
};

}  // namespace vfrng

#endif  // VFRNG_THREAD_POOL_HPP
