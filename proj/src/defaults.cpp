#include "celle/defaults.hpp"

namespace celle {

const std::string& default_library_json() {
    static const std::string text = R"({
  "cells": [
    { "name": "INVX1",   "inputs": ["A"],           "output": "Y", "area": 0.55, "truth": "0b01" },
    { "name": "BUFX2",   "inputs": ["A"],           "output": "Y", "area": 1.0,  "truth": "0b10" },
    { "name": "NAND2X1", "inputs": ["A", "B"],      "output": "Y", "area": 0.75, "truth": "0b0111" },
    { "name": "NOR2X1",  "inputs": ["A", "B"],      "output": "Y", "area": 0.75, "truth": "0b0001" },
    { "name": "NAND3X1", "inputs": ["A", "B", "C"], "output": "Y", "area": 1.15, "truth": "0b01111111" },
    { "name": "NOR3X1",  "inputs": ["A", "B", "C"], "output": "Y", "area": 1.15, "truth": "0b00000001" },
    { "name": "AOI21X1", "inputs": ["A", "B", "C"], "output": "Y", "area": 1.5,  "truth": "0b00000111" },
    { "name": "OAI21X1", "inputs": ["A", "B", "C"], "output": "Y", "area": 1.2,  "truth": "0b00011111" },
    { "name": "AND2X2",  "inputs": ["A", "B"],      "output": "Y", "area": 2.0,  "truth": "0b1000" },
    { "name": "OR2X2",   "inputs": ["A", "B"],      "output": "Y", "area": 2.0,  "truth": "0b1110" },
    { "name": "XOR2X1",  "inputs": ["A", "B"],      "output": "Y", "area": 4.5,  "truth": "0b0110" },
    { "name": "XNOR2X1", "inputs": ["A", "B"],      "output": "Y", "area": 4.5,  "truth": "0b1001" }
  ]
}
)";
    return text;
}

const std::string& default_rules_text() {
    static const std::string text = R"(# Default rewrite rules for the built-in library.
# 14 commutativity rules
comm_and2:      AND2X2(a,b)   => AND2X2(b,a)
comm_or2:       OR2X2(a,b)    => OR2X2(b,a)
comm_xor2:      XOR2X1(a,b)   => XOR2X1(b,a)
comm_nand2:     NAND2X1(a,b)  => NAND2X1(b,a)
comm_nor2:      NOR2X1(a,b)   => NOR2X1(b,a)
comm_xnor2:     XNOR2X1(a,b)  => XNOR2X1(b,a)
comm_nand3_01:  NAND3X1(a,b,c) => NAND3X1(b,a,c)
comm_nand3_12:  NAND3X1(a,b,c) => NAND3X1(a,c,b)
comm_nand3_rot: NAND3X1(a,b,c) => NAND3X1(c,a,b)
comm_nor3_01:   NOR3X1(a,b,c)  => NOR3X1(b,a,c)
comm_nor3_12:   NOR3X1(a,b,c)  => NOR3X1(a,c,b)
comm_nor3_rot:  NOR3X1(a,b,c)  => NOR3X1(c,a,b)
comm_aoi21:     AOI21X1(a,b,c) => AOI21X1(b,a,c)
comm_oai21:     OAI21X1(a,b,c) => OAI21X1(b,a,c)
# 4 De Morgan rules
demorgan_nand:        OR2X2(INVX1(a),INVX1(b))  => NAND2X1(a,b)
demorgan_nor:         AND2X2(INVX1(a),INVX1(b)) => NOR2X1(a,b)
demorgan_nand_expand: NAND2X1(a,b) => OR2X2(INVX1(a),INVX1(b))
demorgan_nor_expand:  NOR2X1(a,b)  => AND2X2(INVX1(a),INVX1(b))
# 6 simplification rules
simp_nand:        INVX1(AND2X2(a,b)) => NAND2X1(a,b)
simp_nor:         INVX1(OR2X2(a,b))  => NOR2X1(a,b)
simp_xnor:        INVX1(XOR2X1(a,b)) => XNOR2X1(a,b)
simp_nand_expand: NAND2X1(a,b) => INVX1(AND2X2(a,b))
simp_nor_expand:  NOR2X1(a,b)  => INVX1(OR2X2(a,b))
simp_xnor_expand: XNOR2X1(a,b) => INVX1(XOR2X1(a,b))
# 1 involution rule
involution: INVX1(INVX1(a)) => a
)";
    return text;
}

}  // namespace celle
