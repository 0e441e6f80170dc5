#include "volcast/windows.hpp"

#include "volcast/errors.hpp"

namespace volcast::pipeline {

std::vector<WindowRanges> split_windows(std::size_t n_rows, const WindowPlan& plan) {
    if (plan.train_days <= 0 || plan.val_days <= 0 || plan.test_days <= 0 ||
        plan.step_days <= 0)
        throw data_error("split_windows: all window counts must be positive");
    const std::size_t total = static_cast<std::size_t>(plan.total());
    if (n_rows < total)
        throw data_error("split_windows: dataset shorter than one window (" +
                         std::to_string(n_rows) + " < " + std::to_string(total) + ")");
    std::vector<WindowRanges> out;
    const std::size_t step = static_cast<std::size_t>(plan.step_days);
    for (std::size_t start = 0; start + total <= n_rows; start += step) {
        WindowRanges w;
        w.train_begin = start;
        w.train_end = start + static_cast<std::size_t>(plan.train_days);
        w.val_end = w.train_end + static_cast<std::size_t>(plan.val_days);
        w.test_end = w.val_end + static_cast<std::size_t>(plan.test_days);
        out.push_back(w);
    }
    return out;
}

}  // namespace volcast::pipeline
