"""Fixed angles and guarantees for 3-regular graphs, p = 1..11, as printed (radians)."""

CUBIC_FIXED_ANGLES: dict[int, dict] = {
    1: {"guarantee": 0.6925, "gamma": [0.616], "beta": [0.393]},
    2: {"guarantee": 0.7559, "gamma": [0.488, 0.898], "beta": [0.555, 0.293]},
    3: {"guarantee": 0.7924, "gamma": [0.422, 0.798, 0.937], "beta": [0.609, 0.459, 0.235]},
    4: {"guarantee": 0.8169, "gamma": [0.409, 0.781, 0.988, 1.156], "beta": [0.600, 0.434, 0.297, 0.159]},
    5: {
        "guarantee": 0.8364,
        "gamma": [0.360, 0.707, 0.823, 1.005, 1.154],
        "beta": [0.632, 0.523, 0.390, 0.275, 0.149],
    },
    6: {
        "guarantee": 0.8499,
        "gamma": [0.331, 0.645, 0.731, 0.837, 1.009, 1.126],
        "beta": [0.636, 0.534, 0.463, 0.360, 0.259, 0.139],
    },
    7: {
        "guarantee": 0.8598,
        "gamma": [0.310, 0.618, 0.690, 0.751, 0.859, 1.020, 1.122],
        "beta": [0.648, 0.554, 0.490, 0.445, 0.341, 0.244, 0.131],
    },
    8: {
        "guarantee": 0.8674,
        "gamma": [0.295, 0.587, 0.654, 0.708, 0.765, 0.864, 1.026, 1.116],
        "beta": [0.649, 0.555, 0.500, 0.469, 0.420, 0.319, 0.231, 0.123],
    },
    9: {
        "guarantee": 0.8735,
        "gamma": [0.279, 0.566, 0.631, 0.679, 0.726, 0.768, 0.875, 1.037, 1.118],
        "beta": [0.654, 0.562, 0.509, 0.487, 0.451, 0.403, 0.305, 0.220, 0.117],
    },
    10: {
        "guarantee": 0.8785,
        "gamma": [0.267, 0.545, 0.610, 0.656, 0.696, 0.729, 0.774, 0.882, 1.044, 1.115],
        "beta": [0.656, 0.563, 0.514, 0.496, 0.469, 0.436, 0.388, 0.291, 0.211, 0.112],
    },
    11: {
        "guarantee": 0.8828,
        "gamma": [0.257, 0.528, 0.592, 0.640, 0.677, 0.702, 0.737, 0.775, 0.884, 1.047, 1.115],
        "beta": [0.656, 0.563, 0.516, 0.504, 0.482, 0.456, 0.421, 0.371, 0.276, 0.201, 0.107],
    },
}

# Goemans-Williamson worst-case ratio, for comparison with the guarantees above.
GW_RATIO = 0.8786
