"""Heat map of a `dispersal scan` CSV: phase_map.py scan.csv out.png"""
import sys

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from matplotlib.colors import ListedColormap

COLOURS = {"gray": 0, "yellow": 1, "white": 2, "boundary": 3}

src, dst = sys.argv[1], sys.argv[2]
df = pd.read_csv(src, comment="#")
lam = np.sort(df["lambda"].unique())
p = np.sort(df["p"].unique())
grid = df.pivot(index="p", columns="lambda", values="region").replace(COLOURS).to_numpy(dtype=float)

cmap = ListedColormap(["#b0b0b0", "#f2d64b", "#ffffff", "#d62728"])
plt.pcolormesh(lam, p, grid, cmap=cmap, vmin=-0.5, vmax=3.5, shading="nearest")
plt.xlabel("lambda")
plt.ylabel("p")
plt.savefig(dst, dpi=150, bbox_inches="tight")
