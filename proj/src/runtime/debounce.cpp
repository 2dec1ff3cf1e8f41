#include "coexlab/runtime/runtime.hpp"

namespace coexlab::rt {

std::optional<int> Debounce::push(int cls) {
    if (cls == state_) {
        pending_count_ = 0;
        return std::nullopt;
    }
    if (cls == pending_) {
        if (++pending_count_ >= 2) {
            state_ = cls;
            pending_ = -1;
            pending_count_ = 0;
            return state_;
        }
        return std::nullopt;
    }
    pending_ = cls;
    pending_count_ = 1;
    return std::nullopt;
}

std::vector<detect::Decision> debounce_stream(const std::vector<detect::Decision>& classes,
                                              int initial_state) {
    Debounce db(initial_state);
    std::vector<detect::Decision> changes;
    for (const auto& d : classes)
        if (auto s = db.push(d.ap_count)) changes.push_back({d.t, *s});
    return changes;
}

}  // namespace coexlab::rt
