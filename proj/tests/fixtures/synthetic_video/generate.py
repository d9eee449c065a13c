# Copyright 2026 The swer-toolkit Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates features.bin and frames/ for the synthetic three-scene video."""

import pathlib
import random
import struct

from PIL import Image, ImageDraw

HERE = pathlib.Path(__file__).resolve().parent


def main():
    random.seed(5)
    frames, dim, fps = 30, 8, 1.0
    values = []
    for t in range(frames):
        row = [0.02 * random.random() for _ in range(dim)]
        row[t // 10] += 1.0
        values += row
    with open(HERE / "features.bin", "wb") as f:
        f.write(struct.pack("<IIf", frames, dim, fps))
        f.write(struct.pack("<%df" % len(values), *values))
    titles = ["Fine-tuning BERT on 30 tasks", "Comparison with RoBERTa", "Thanks"]
    (HERE / "frames").mkdir(exist_ok=True)
    for i, title in enumerate(titles, 1):
        image = Image.new("RGB", (160, 90), (255, 255, 255))
        ImageDraw.Draw(image).text((6, 38), title, fill=(0, 0, 0))
        image.save(HERE / "frames" / ("scene_%04d.png" % i), optimize=False)


if __name__ == "__main__":
    main()
