#include "mctslab/domains/testbed.hpp"

namespace mctslab::domains {

oracle::LayeredMdp abstraction_testbed() {
    const char* text = R"(
layer 0
state s0
layer 1
state y0
state y1
state y2
state y3
layer 2
state x0
state x1
state x2
state x3
state x4
layer 3
state w0
state w1
state w2
state w3
state w4
state w5
state w6
layer 4
state t0 terminal
state t1 terminal
state t2 terminal

edge s0 0 y0:0.5 y1:0.5 r=0
edge s0 1 y2:0.5 y3:0.5 r=0

edge y0 0 x0:1 r=0
edge y0 1 x3:0.5 x4:0.5 r=0
edge y1 0 x1:1 r=0
edge y1 1 x3:1 r=0
edge y2 0 x2:1 r=0
edge y2 1 x2:1 r=-0.25
edge y3 0 x3:1 r=0
edge y3 1 x4:1 r=-1

edge x0 0 w0:1 r=0
edge x0 1 w3:1 r=0
edge x1 0 w1:1 r=0
edge x1 1 w4:1 r=0
edge x2 0 w2:1 r=0
edge x2 1 w5:1 r=0
edge x3 0 w3:0.5 w4:0.5 r=0.25
edge x3 1 w5:0.5 w6:0.5 r=1
edge x4 0 w3:1 r=0.5
edge x4 1 w4:1 r=0.125

edge w0 0 t0:1 r=1
edge w0 1 t1:1 r=0
edge w1 0 t0:1 r=1
edge w1 1 t1:1 r=0
edge w2 0 t0:1 r=1
edge w2 1 t1:0.5 t2:0.5 r=0.5
edge w3 0 t1:1 r=0.5
edge w3 1 t2:1 r=0.25
edge w4 0 t0:0.5 t1:0.5 r=0.75
edge w4 1 t2:1 r=0
edge w5 0 t2:1 r=-0.5
edge w5 1 t2:1 r=-1
edge w6 0 t2:1 r=-0.5
edge w6 1 t0:0.5 t2:0.5 r=-0.75
)";
    return oracle::LayeredMdp::parse_string(text);
}

}  // namespace mctslab::domains
