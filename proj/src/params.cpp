#include "qubolab/params.hpp"

#include <cmath>
#include <stdexcept>

namespace qubolab {

ParamSlot& ParamStore::add(const std::string& name, DenseMatrix init) {
    if (contains(name)) throw std::invalid_argument("duplicate parameter slot: " + name);
    ParamSlot slot;
    slot.grad = DenseMatrix(init.rows(), init.cols());
    slot.adam_m = DenseMatrix(init.rows(), init.cols());
    slot.adam_v = DenseMatrix(init.rows(), init.cols());
    slot.value = std::move(init);
    return slots_.emplace(name, std::move(slot)).first->second;
}

ParamSlot& ParamStore::slot(const std::string& name) {
    auto it = slots_.find(name);
    if (it == slots_.end()) throw std::invalid_argument("unknown parameter slot: " + name);
    return it->second;
}

const ParamSlot& ParamStore::slot(const std::string& name) const {
    auto it = slots_.find(name);
    if (it == slots_.end()) throw std::invalid_argument("unknown parameter slot: " + name);
    return it->second;
}

void ParamStore::zero_grads() {
    for (auto& [name, slot] : slots_) slot.grad.fill(0.0);
}

void adam_step(ParamStore& params, double lr) {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;

    params.advance_step();
    const double t = static_cast<double>(params.step());
    const double m_corr = 1.0 - std::pow(beta1, t);
    const double v_corr = 1.0 - std::pow(beta2, t);

    for (auto& [name, slot] : params) {
        double* w = slot.value.data();
        double* g = slot.grad.data();
        double* m = slot.adam_m.data();
        double* v = slot.adam_v.data();
        for (std::size_t k = 0; k < slot.value.size(); ++k) {
            m[k] = beta1 * m[k] + (1.0 - beta1) * g[k];
            v[k] = beta2 * v[k] + (1.0 - beta2) * g[k] * g[k];
            double m_hat = m[k] / m_corr;
            double v_hat = v[k] / v_corr;
            w[k] -= lr * m_hat / (std::sqrt(v_hat) + eps);
            g[k] = 0.0;
        }
    }
}

}  // namespace qubolab
