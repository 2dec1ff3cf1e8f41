#include "coexlab/nn/train.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "coexlab/rng.hpp"

namespace coexlab::nn {
namespace {

struct Grads {
    std::array<FilterBank, 3> filters;
    std::array<std::vector<double>, 3> gamma, beta;
    std::vector<double> head_w, head_b;
};

Grads backward(FcnModel& model, const ForwardCache& cache, const std::vector<double>& grad_logits,
               std::size_t batch) {
    Grads g;
    std::vector<double> grad_pooled;
    dense_backward(model.head, cache.pooled, grad_logits, batch, grad_pooled, g.head_w, g.head_b);

    const std::size_t top_ch = model.blocks[2].filters.batch;
    Tensor grad = global_avg_pool_backward(grad_pooled, batch, top_ch, model.width);

    for (int blk = 2; blk >= 0; --blk) {
        const auto ublk = static_cast<std::size_t>(blk);
        relu_backward_inplace(cache.bn_out[ublk], grad);
        Tensor grad_conv = batch_norm_backward(grad, cache.bn[ublk], model.blocks[ublk].bn,
                                               g.gamma[ublk], g.beta[ublk]);
        const Tensor& block_in = ublk == 0 ? cache.input : cache.act[ublk - 1];
        g.filters[ublk] =
            conv1d_grad_filters(block_in, grad_conv, model.blocks[ublk].filters.length);
        if (ublk > 0)
            grad = conv1d_grad_input(grad_conv, model.blocks[ublk].filters,
                                     model.blocks[ublk].filters.channels);
    }
    return g;
}

struct ParamRef {
    std::vector<double>* value;
    const std::vector<double>* grad;
};

std::vector<ParamRef> param_refs(FcnModel& model, const Grads& g) {
    std::vector<ParamRef> refs;
    for (std::size_t blk = 0; blk < 3; ++blk) {
        refs.push_back({&model.blocks[blk].filters.data, &g.filters[blk].data});
        refs.push_back({&model.blocks[blk].bn.gamma, &g.gamma[blk]});
        refs.push_back({&model.blocks[blk].bn.beta, &g.beta[blk]});
    }
    refs.push_back({&model.head.weight, &g.head_w});
    refs.push_back({&model.head.bias, &g.head_b});
    return refs;
}

class OptimizerState {
public:
    OptimizerState(const TrainConfig& cfg, const std::vector<std::size_t>& sizes)
        : cfg_(cfg) {
        m_.resize(sizes.size());
        v_.resize(sizes.size());
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            m_[i].assign(sizes[i], 0.0);
            if (cfg.optimizer == Optimizer::Adam) v_[i].assign(sizes[i], 0.0);
        }
    }

    void step(std::vector<ParamRef>& refs, double lr) {
        ++t_;
        for (std::size_t i = 0; i < refs.size(); ++i) {
            auto& theta = *refs[i].value;
            const auto& grad = *refs[i].grad;
            if (cfg_.optimizer == Optimizer::Sgd) {
                for (std::size_t n = 0; n < theta.size(); ++n) {
                    const double gd = grad[n] + cfg_.weight_decay * theta[n];
                    m_[i][n] = cfg_.momentum * m_[i][n] + gd;
                    theta[n] -= lr * m_[i][n];
                }
            } else {
                const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
                const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t_));
                const double bc2 = 1.0 - std::pow(b2, static_cast<double>(t_));
                for (std::size_t n = 0; n < theta.size(); ++n) {
                    const double gd = grad[n] + cfg_.weight_decay * theta[n];
                    m_[i][n] = b1 * m_[i][n] + (1.0 - b1) * gd;
                    v_[i][n] = b2 * v_[i][n] + (1.0 - b2) * gd * gd;
                    theta[n] -= lr * (m_[i][n] / bc1) / (std::sqrt(v_[i][n] / bc2) + eps);
                }
            }
        }
    }

private:
    TrainConfig cfg_;
    std::uint64_t t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

}  // namespace

Tensor make_batch(const std::vector<data::LabeledChunk>& chunks,
                  const std::vector<std::size_t>& index, std::size_t lo, std::size_t hi,
                  std::vector<int>* labels) {
    const std::size_t n = hi - lo;
    const std::size_t w = chunks[index[lo]].values.size();
    Tensor x(n, 1, w);
    if (labels) labels->resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = chunks[index[lo + i]];
        if (c.values.size() != w) throw std::invalid_argument("make_batch: ragged chunk widths");
        std::copy(c.values.begin(), c.values.end(), x.row(i, 0));
        if (labels) (*labels)[i] = c.label;
    }
    return x;
}

TrainHistory train(FcnModel& model, const std::vector<data::LabeledChunk>& train_set,
                   const std::vector<data::LabeledChunk>& val_set, const TrainConfig& cfg) {
    if (train_set.empty()) throw std::invalid_argument("train: empty training set");
    for (const auto& c : train_set) {
        if (c.label < 0 || static_cast<std::size_t>(c.label) >= model.classes)
            throw std::invalid_argument("train: label outside model class range");
        for (double v : c.values)
            if (!std::isfinite(v))
                throw std::invalid_argument("train: non-finite value in training chunk");
    }

    Rng rng(cfg.seed);

    // When no validation set is supplied, carve val_fraction off the train
    // set (after a deterministic shuffle) for the plateau scheduler.
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size() - 1; i > 0; --i)
        std::swap(order[i], order[rng.next_below(i + 1)]);

    std::vector<data::LabeledChunk> carved_val;
    const std::vector<data::LabeledChunk>* val = &val_set;
    std::vector<std::size_t> train_idx;
    if (val_set.empty() && cfg.val_fraction > 0.0 && train_set.size() >= 10) {
        const std::size_t n_val =
            std::max<std::size_t>(1, static_cast<std::size_t>(
                                         cfg.val_fraction * static_cast<double>(order.size())));
        for (std::size_t i = 0; i < n_val; ++i) carved_val.push_back(train_set[order[i]]);
        train_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
        val = &carved_val;
    } else {
        train_idx = order;
    }

    std::vector<std::size_t> sizes;
    for (std::size_t blk = 0; blk < 3; ++blk) {
        sizes.push_back(model.blocks[blk].filters.data.size());
        sizes.push_back(model.blocks[blk].bn.gamma.size());
        sizes.push_back(model.blocks[blk].bn.beta.size());
    }
    sizes.push_back(model.head.weight.size());
    sizes.push_back(model.head.bias.size());
    OptimizerState opt(cfg, sizes);

    double lr = cfg.lr;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t stale = 0;
    TrainHistory history;

    ForwardCache cache;
    std::vector<int> labels;
    std::vector<double> grad_logits;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = train_idx.size() - 1; i > 0; --i)
            std::swap(train_idx[i], train_idx[rng.next_below(i + 1)]);

        double loss_sum = 0.0;
        std::size_t correct = 0, seen = 0;
        for (std::size_t lo = 0; lo < train_idx.size(); lo += cfg.batch) {
            const std::size_t hi = std::min(lo + cfg.batch, train_idx.size());
            Tensor x = make_batch(train_set, train_idx, lo, hi, &labels);
            fcn_forward_train(model, x, cache);
            const double loss = cross_entropy(cache.logits, labels, model.classes, &grad_logits);
            if (!std::isfinite(loss))
                throw std::runtime_error("training aborted: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(lo / cfg.batch));
            loss_sum += loss * static_cast<double>(hi - lo);
            const auto pred = argmax_rows(cache.logits, hi - lo, model.classes);
            for (std::size_t i = 0; i < pred.size(); ++i)
                if (pred[i] == labels[i]) ++correct;
            seen += hi - lo;

            if (lr > 0.0) {
                Grads g = backward(model, cache, grad_logits, hi - lo);
                auto refs = param_refs(model, g);
                opt.step(refs, lr);
            }
        }

        EpochStats st;
        st.train_loss = loss_sum / static_cast<double>(seen);
        st.train_acc = static_cast<double>(correct) / static_cast<double>(seen);
        st.lr = lr;
        if (!val->empty()) {
            const EvalResult ev = evaluate(model, *val, cfg.batch);
            st.val_loss = ev.loss;
            st.val_acc = ev.accuracy;
            if (ev.loss < best_val - cfg.plateau_threshold) {
                best_val = ev.loss;
                stale = 0;
            } else if (++stale >= cfg.plateau_patience) {
                lr *= cfg.plateau_factor;
                stale = 0;
            }
        }
        history.epochs.push_back(st);
    }
    return history;
}

namespace {

EvalResult eval_impl(const FcnModel& model, const std::vector<data::LabeledChunk>& set,
                     std::size_t batch, double compression_rate, bool compressed) {
    if (set.empty()) throw std::invalid_argument("evaluate: empty set");
    std::vector<std::size_t> idx(set.size());
    std::iota(idx.begin(), idx.end(), 0);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    std::vector<int> labels;
    for (std::size_t lo = 0; lo < set.size(); lo += batch) {
        const std::size_t hi = std::min(lo + batch, set.size());
        Tensor x = make_batch(set, idx, lo, hi, &labels);
        const std::vector<double> logits =
            compressed ? fcn_forward_compressed(model, x, compression_rate)
                       : fcn_forward(model, x);
        loss_sum += cross_entropy(logits, labels, model.classes) *
                    static_cast<double>(hi - lo);
        const auto pred = argmax_rows(logits, hi - lo, model.classes);
        for (std::size_t i = 0; i < pred.size(); ++i)
            if (pred[i] == labels[i]) ++correct;
    }
    EvalResult r;
    r.loss = loss_sum / static_cast<double>(set.size());
    r.accuracy = static_cast<double>(correct) / static_cast<double>(set.size());
    return r;
}

}  // namespace

EvalResult evaluate(const FcnModel& model, const std::vector<data::LabeledChunk>& set,
                    std::size_t batch) {
    return eval_impl(model, set, batch, 0.0, false);
}

EvalResult evaluate_compressed(const FcnModel& model, const std::vector<data::LabeledChunk>& set,
                               double compression_rate, std::size_t batch) {
    return eval_impl(model, set, batch, compression_rate, true);
}

void write_history_csv(const TrainHistory& history, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "epoch,train_loss,train_acc,val_loss,val_acc,lr\n";
    char buf[32];
    auto put = [&](double v, char sep) {
        const auto res = std::to_chars(buf, buf + sizeof(buf), v);
        out.write(buf, res.ptr - buf);
        out.put(sep);
    };
    for (std::size_t e = 0; e < history.epochs.size(); ++e) {
        const auto& s = history.epochs[e];
        out << e << ',';
        put(s.train_loss, ',');
        put(s.train_acc, ',');
        put(s.val_loss, ',');
        put(s.val_acc, ',');
        put(s.lr, '\n');
    }
}

}  // namespace coexlab::nn
