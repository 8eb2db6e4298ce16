/** Test fixtures: synthetic checkpoints, synthetic ACAS-style text
 * files, and a self-contained reference forward evaluator used to
 * cross-check conversions. */

import { writeFileSync } from "fs";
import { join } from "path";

/** Small deterministic PRNG so fixtures are reproducible. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export interface DenseWeights {
  /** row-major [out][in], exactly representable as float32 */
  weight: number[][];
  bias: number[];
}

export function randomDense(
  rng: () => number,
  fanIn: number,
  fanOut: number,
): DenseWeights {
  const weight: number[][] = [];
  for (let o = 0; o < fanOut; o++) {
    const row: number[] = [];
    for (let i = 0; i < fanIn; i++) {
      row.push(Math.fround(rng() * 2 - 1));
    }
    weight.push(row);
  }
  const bias = Array.from({ length: fanOut }, () =>
    Math.fround(rng() * 0.2 - 0.1),
  );
  return { weight, bias };
}

/** Reference forward pass: relu on all but the last layer. */
export function refForward(layers: DenseWeights[], x: number[]): number[] {
  let h = x;
  layers.forEach((layer, k) => {
    const z = layer.weight.map(
      (row, o) => row.reduce((acc, w, i) => acc + w * h[i], layer.bias[o]),
    );
    h = k < layers.length - 1 ? z.map((v) => Math.max(v, 0)) : z;
  });
  return h;
}

/** Write a two-file layers-model checkpoint into dir; returns the
 * model.json path. Kernels are stored fan-in-major as [in, out]. */
export function writeCheckpoint(
  dir: string,
  layers: DenseWeights[],
  opts: { classNameOverride?: string } = {},
): string {
  const layerConfigs = layers.map((layer, k) => ({
    class_name: opts.classNameOverride ?? "Dense",
    config: {
      name: `dense_${k}`,
      units: layer.weight.length,
      activation: k < layers.length - 1 ? "relu" : "linear",
    },
  }));
  const weights: { name: string; shape: number[]; dtype: string }[] = [];
  const chunks: Buffer[] = [];
  layers.forEach((layer, k) => {
    const fanOut = layer.weight.length;
    const fanIn = layer.weight[0].length;
    const kernel = Buffer.alloc(fanIn * fanOut * 4);
    for (let i = 0; i < fanIn; i++) {
      for (let o = 0; o < fanOut; o++) {
        kernel.writeFloatLE(layer.weight[o][i], (i * fanOut + o) * 4);
      }
    }
    const bias = Buffer.alloc(fanOut * 4);
    layer.bias.forEach((v, o) => bias.writeFloatLE(v, o * 4));
    weights.push({ name: `dense_${k}/kernel`, shape: [fanIn, fanOut], dtype: "float32" });
    weights.push({ name: `dense_${k}/bias`, shape: [fanOut], dtype: "float32" });
    chunks.push(kernel, bias);
  });
  const shard = "group1-shard1of1.bin";
  writeFileSync(join(dir, shard), Buffer.concat(chunks));
  const modelJson = {
    modelTopology: {
      model_config: {
        class_name: "Sequential",
        config: { layers: layerConfigs },
      },
    },
    weightsManifest: [{ paths: [shard], weights }],
  };
  const path = join(dir, "model.json");
  writeFileSync(path, JSON.stringify(modelJson));
  return path;
}

/** Write an ACAS-style text network; returns its path. */
export function writeAcasText(
  dir: string,
  layers: DenseWeights[],
  name = "net.nnet",
): string {
  const sizes = [layers[0].weight[0].length, ...layers.map((l) => l.weight.length)];
  const inputSize = sizes[0];
  const outputSize = sizes[sizes.length - 1];
  const lines: string[] = [
    "// synthetic fixture",
    `${layers.length},${inputSize},${outputSize},${Math.max(...sizes)},`,
    sizes.join(",") + ",",
    "0,",
    Array.from({ length: inputSize }, () => "-1.0").join(",") + ",",
    Array.from({ length: inputSize }, () => "1.0").join(",") + ",",
    Array.from({ length: inputSize + 1 }, () => "0.0").join(",") + ",",
    Array.from({ length: inputSize + 1 }, () => "1.0").join(",") + ",",
  ];
  for (const layer of layers) {
    for (const row of layer.weight) {
      lines.push(row.map((v) => v.toString()).join(",") + ",");
    }
    for (const b of layer.bias) {
      lines.push(b.toString() + ",");
    }
  }
  const path = join(dir, name);
  writeFileSync(path, lines.join("\n") + "\n");
  return path;
}
