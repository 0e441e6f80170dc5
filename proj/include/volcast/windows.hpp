#pragma once

#include <cstddef>
#include <vector>

namespace volcast::pipeline {

// Rolling-window geometry in trading-day row counts. The defaults tile a
// 25-year (6300-row) span into 11 overlapping windows.
struct WindowPlan {
    int train_days = 2772;
    int val_days = 756;
    int test_days = 252;
    int step_days = 252;

    int total() const { return train_days + val_days + test_days; }
};

// Half-open row ranges; val begins at train_end, test at val_end.
struct WindowRanges {
    std::size_t train_begin = 0;
    std::size_t train_end = 0;
    std::size_t val_end = 0;
    std::size_t test_end = 0;
};

// Window k starts at row k * step_days; windows that would overrun the data
// are dropped. Throws data_error when not even one window fits.
std::vector<WindowRanges> split_windows(std::size_t n_rows, const WindowPlan& plan);

}  // namespace volcast::pipeline
