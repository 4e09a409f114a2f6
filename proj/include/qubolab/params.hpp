#ifndef QUBOLAB_PARAMS_HPP
#define QUBOLAB_PARAMS_HPP

#include <map>
#include <string>

#include "qubolab/matrix.hpp"

namespace qubolab {

struct ParamSlot {
    DenseMatrix value;
    DenseMatrix grad;
    DenseMatrix adam_m;
    DenseMatrix adam_v;
};

/// Named trainable weights with gradient accumulators and Adam moment
/// buffers. One store belongs to exactly one solver run at a time.
class ParamStore {
public:
    ParamSlot& add(const std::string& name, DenseMatrix init);
    ParamSlot& slot(const std::string& name);
    const ParamSlot& slot(const std::string& name) const;
    bool contains(const std::string& name) const { return slots_.count(name) != 0; }

    void zero_grads();
    long long step() const { return step_; }
    void advance_step() { ++step_; }

    auto begin() { return slots_.begin(); }
    auto end() { return slots_.end(); }
    auto begin() const { return slots_.begin(); }
    auto end() const { return slots_.end(); }
    std::size_t size() const { return slots_.size(); }

private:
    std::map<std::string, ParamSlot> slots_;
    long long step_ = 0;
};

/// Standard Adam update (beta1=0.9, beta2=0.999, eps=1e-8) over every slot,
/// with bias correction; zeroes the gradients afterwards.
void adam_step(ParamStore& params, double lr);

}  // namespace qubolab

#endif
