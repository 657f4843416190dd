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

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "propreg/fft.hpp"
#include "propreg/operator_calculus.hpp"

namespace propreg {
namespace {

// Read-mostly cache: many readers, one writer on first build.
class DenseCache {
public:
    static DenseCache& instance() {
        static DenseCache cache;
        return cache;
    }

    std::shared_ptr<const DenseA> get(const Grid& g) {
        const auto key = std::make_pair(g.points_per_axis(), g.half_width());
        {
            std::shared_lock lock(mutex_);
            if(auto it = entries_.find(key); it != entries_.end()) return it->second;
        }
        std::unique_lock lock(mutex_);
        if(auto it = entries_.find(key); it != entries_.end()) return it->second;
        auto built = build(g);
        entries_.emplace(key, built);
        return built;
    }

private:
    static std::shared_ptr<const DenseA> build(const Grid& g) {
        const int n = g.points_per_axis();
        const auto& x = g.x_axis();
        const Eigen::MatrixXcd P = dense_momentum_multiplier(g, [](double p) { return cplx(p, 0.0); });
        auto out = std::make_shared<DenseA>();
        Eigen::MatrixXcd A(n, n);
        for(int j = 0; j < n; ++j)
            for(int i = 0; i < n; ++i) A(i, j) = 0.5 * (x[i] + x[j]) * P(i, j);
        out->matrix = 0.5 * (A + A.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out->matrix);
        out->eigenvalues  = es.eigenvalues();
        out->eigenvectors = es.eigenvectors();
        return out;
    }

    std::shared_mutex mutex_;
    std::map<std::pair<int, double>, std::shared_ptr<const DenseA>> entries_;
};

} // namespace

std::shared_ptr<const DenseA> dense_A(const Grid& g) {
    if(g.dim() != 1) throw std::invalid_argument("dense_A: only one-dimensional grids are supported");
    if(g.points_per_axis() > 2048) throw std::invalid_argument("dense_A: N must be <= 2048");
    return DenseCache::instance().get(g);
}

Eigen::MatrixXcd dense_function(const DenseA& a, const ScalarFunction& f) {
    Eigen::VectorXd d(a.eigenvalues.size());
    for(Eigen::Index i = 0; i < d.size(); ++i) d[i] = f(a.eigenvalues[i]);
    return a.eigenvectors * d.asDiagonal() * a.eigenvectors.adjoint();
}

Eigen::MatrixXcd dense_momentum_multiplier(const Grid& g, const std::function<cplx(double)>& f) {
    if(g.dim() != 1) throw std::invalid_argument("dense_momentum_multiplier: 1D only");
    const int n = g.points_per_axis();
    // Circulant: M_{jl} = c_{(j - l) mod n}, c_m = (1/n) sum_k f(p_k) e^{2 pi i k m / n}.
    Field c(n);
    for(int k = 0; k < n; ++k) c[k] = f(g.p_axis()[k]);
    fft::backward(g, c.data());
    c /= static_cast<double>(n);
    Eigen::MatrixXcd M(n, n);
    for(int l = 0; l < n; ++l)
        for(int j = 0; j < n; ++j) M(j, l) = c[((j - l) % n + n) % n];
    return M;
}

Eigen::MatrixXcd coherent_basis(const Grid& g, double x_extent, double p_extent, double width) {
    if(g.dim() != 1) throw std::invalid_argument("coherent_basis: 1D only");
    const auto& x = g.x_axis();
    const int n = g.points_per_axis();
    std::vector<Field> cols;
    for(double x0 = -x_extent; x0 <= x_extent + 1e-9; x0 += 0.5 * width) {
        for(double k = -p_extent; k <= p_extent + 1e-9; k += 0.5 / width) {
            Field c(n);
            for(int j = 0; j < n; ++j)
                c[j] = std::exp(-(x[j] - x0) * (x[j] - x0) / (2.0 * width * width)) *
                       std::polar(1.0, k * x[j]);
            cols.push_back(std::move(c));
        }
    }
    Eigen::MatrixXcd C(n, static_cast<Eigen::Index>(cols.size()));
    for(std::size_t i = 0; i < cols.size(); ++i) C.col(i) = cols[i];
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(C, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    Eigen::Index keep = 0;
    while(keep < s.size() && s[keep] > 1e-6 * s[0]) ++keep;
    return svd.matrixU().leftCols(keep);
}

double operator_norm(const Eigen::MatrixXcd& m) {
    if(m.size() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()[0];
}

double restricted_norm(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& q) {
    return operator_norm(q.adjoint() * m * q);
}

} // namespace propreg
