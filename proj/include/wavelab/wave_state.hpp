#pragma once

#include <wavelab/field.hpp>

namespace wavelab {

struct WaveState {
    GridField u;
    GridField ut;
    double time = 0.0;

    WaveState() = default;
    explicit WaveState(const TorusGrid& g) : u(g), ut(g) {}
    WaveState(GridField u0, GridField u1, double t = 0.0)
        : u(std::move(u0)), ut(std::move(u1)), time(t)
    {
        require_same_grid(u.grid, ut.grid);
    }

    const TorusGrid& grid() const { return u.grid; }
};

}  // namespace wavelab
