"""Pure-Python (numpy) fallback for the cosine-scan kernel.

Same contract as the compiled `_scan` module; used when the extension is not
built or when QAROBUST_NO_EXT is set.
"""

import numpy as np


def cosine_scores(matrix, norms, query, query_norm, out):
    np.dot(matrix, query, out=out)
    out /= norms * query_norm


BACKEND = "numpy"
