#pragma once

#include <doctest.h>

#include <initializer_list>

#include "orthosym/errors.hpp"
#include "orthosym/lattice.hpp"

namespace testing {

inline orthosym::IntMatrix gram(std::initializer_list<std::int64_t> entries, int m) {
    orthosym::IntMatrix S(m, m);
    auto it = entries.begin();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) S(i, j) = *it++;
    return S;
}

inline orthosym::LatticeSpace m0() { return orthosym::LatticeSpace::build(orthosym::IntMatrix(0, 0)); }
inline orthosym::LatticeSpace m1() { return orthosym::LatticeSpace::build(gram({2}, 1)); }

template <class F>
orthosym::ErrorKind error_kind(F&& f) {
    try {
        f();
    } catch (const orthosym::Error& e) {
        return e.kind();
    }
    FAIL("expected an orthosym::Error");
    return orthosym::ErrorKind::InvalidArgument;
}

}  // namespace testing
