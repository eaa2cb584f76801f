"""Ai and Ai' pins from mpmath at 40 digits. Writes tests/pinned_airy.hpp."""
import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
X = [-40, -20, -5, -1, 0, 0.5, 1, 2, 5, 10, 20, 50]

lines = ["#pragma once", "", "// Generated by tests/oracles/airy_oracle.py. Do not edit.", "",
         "namespace pinned {", "", "struct AiPin {", "    double x;", "    double ai;", "    double aip;", "};",
         "", "inline constexpr AiPin kAi[] = {"]
for x in X:
    lines.append(f"    {{{x}, {mp.nstr(mp.airyai(x), 20)}, {mp.nstr(mp.airyai(x, 1), 20)}}},")
lines += ["};", "", "}  // namespace pinned", ""]
Path(sys.argv[1] if len(sys.argv) > 1 else "tests/pinned_airy.hpp").write_text("\n".join(lines))
