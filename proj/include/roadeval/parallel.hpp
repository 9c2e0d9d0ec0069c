// Copyright 2026 The roadeval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef ROADEVAL_PARALLEL_HPP_
#define ROADEVAL_PARALLEL_HPP_

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace roadeval {

/// 0 or negative -> hardware concurrency (at least 1).
inline unsigned effective_threads(int requested)
{
  if (requested > 0) {return static_cast<unsigned>(requested);}
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Runs fn(i) for i in [0, n) across up to `threads` workers.
///
/// Each index must write only to its own output slot; with that discipline the
/// result is identical for every thread count. The first exception thrown by
/// any worker is rethrown on the calling thread.
template<typename Fn>
void parallel_for(std::size_t n, int threads, Fn && fn)
{
  const unsigned workers = std::min<std::size_t>(effective_threads(threads), n == 0 ? 1 : n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {fn(i);}
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back(
      [&, w]() {
        try {
          for (std::size_t i = w; i < n; i += workers) {
            fn(i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
  }
  for (auto & t : pool) {t.join();}
  for (auto & e : errors) {
    if (e) {std::rethrow_exception(e);}
  }
}

}  // namespace roadeval

#endif  // ROADEVAL_PARALLEL_HPP_
