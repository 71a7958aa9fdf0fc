#pragma once

// Published per-vehicle capacity (Mbit/s) and per-packet delay (ms) for the
// default radio, rows D = 6, 20, 50, 100, 200, 300 m and columns N = 2, 4, 6, 8.
// These are typed in from the published tables, not computed.

#include <array>

namespace v2vlab::reference {

inline constexpr std::array<double, 6> kGaps = {6, 20, 50, 100, 200, 300};
inline constexpr std::array<int, 4> kLanes = {2, 4, 6, 8};

inline constexpr double kCapacity[6][4] = {
    {0.0604, 0.0302, 0.0201, 0.0151}, {0.1992, 0.0996, 0.0664, 0.0498},
    {0.4860, 0.2430, 0.1620, 0.1215}, {0.9346, 0.4673, 0.3115, 0.2337},
    {1.7357, 0.8679, 0.5786, 0.4339}, {2.4300, 1.2150, 0.8100, 0.6075},
};

inline constexpr double kDelay[6][4] = {
    {52.9383, 105.8765, 158.8148, 211.7531}, {16.0658, 32.1317, 48.1975, 64.2634},
    {6.5844, 13.1687, 19.7531, 26.3374},     {3.4239, 6.8477, 10.2716, 13.6955},
    {1.8436, 3.6872, 5.5309, 7.3745},        {1.3169, 2.6337, 3.9506, 5.2675},
};

}  // namespace v2vlab::reference
