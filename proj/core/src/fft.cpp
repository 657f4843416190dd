/*
 * Copyright 2026 The propreg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "propreg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace propreg::fft {
namespace {

// FFTW planning is not thread safe; execution with new-array calls is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan dft(int dim, int n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_tuple(dim, n, sign);
        if(auto it = dft_.find(key); it != dft_.end()) return it->second;
        int dims[3] = {n, n, n};
        std::size_t total = 1;
        for(int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(n);
        auto* buf = fftw_alloc_complex(total);
        auto plan = fftw_plan_dft(dim, dims, buf, buf, sign,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        dft_.emplace(key, plan);
        return plan;
    }

    fftw_plan dct(int n) {
        std::lock_guard<std::mutex> lock(mutex_);
        if(auto it = dct_.find(n); it != dct_.end()) return it->second;
        auto* in  = fftw_alloc_real(n);
        auto* out = fftw_alloc_real(n);
        auto plan = fftw_plan_r2r_1d(n, in, out, FFTW_REDFT10,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        dct_.emplace(n, plan);
        return plan;
    }

private:
    PlanCache() = default;
    ~PlanCache() {
        for(auto& [k, p] : dft_) fftw_destroy_plan(p);
        for(auto& [k, p] : dct_) fftw_destroy_plan(p);
    }
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> dft_;
    std::map<int, fftw_plan> dct_;
};

void run(const Grid& g, cplx* data, int sign) {
    auto plan = PlanCache::instance().dft(g.dim(), g.points_per_axis(), sign);
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, p, p);
}

} // namespace

void forward(const Grid& g, cplx* data) { run(g, data, FFTW_FORWARD); }
void backward(const Grid& g, cplx* data) { run(g, data, FFTW_BACKWARD); }

std::vector<double> dct2(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> in(x), out(x.size());
    if(n == 0) return out;
    auto plan = PlanCache::instance().dct(n);
    fftw_execute_r2r(plan, in.data(), out.data());
    return out;
}

} // namespace propreg::fft
