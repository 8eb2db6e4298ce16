/** Layers-model checkpoint import.
 *
 * Reads the common two-file layout: a `model.json` carrying the layer
 * topology plus a weights manifest, and binary shard files with the
 * raw float32 tensors. Only sequential stacks of fully connected
 * layers with relu/linear activations convert; anything else
 * (convolutions, pooling, normalization) is rejected loudly.
 *
 * Kernels are stored fan-in-major ([in, out]) in the checkpoint and
 * transposed to the row-major [out, in] convention of the target
 * format.
 */

import { readFileSync } from "fs";
import { dirname, join } from "path";

import { ParseError, ShapeError, UnsupportedLayerError } from "./errors.js";
import {
  ConversionManifest,
  JsonLayer,
  JsonNetwork,
  writeNetwork,
} from "./format.js";

interface LayerConfig {
  class_name: string;
  config: {
    name?: string;
    units?: number;
    activation?: string;
    batch_input_shape?: (number | null)[];
  };
}

interface WeightSpec {
  name: string;
  shape: number[];
  dtype: string;
}

interface ManifestGroup {
  paths: string[];
  weights: WeightSpec[];
}

const ACTIVATION_MAP: Record<string, "relu" | "identity"> = {
  relu: "relu",
  linear: "identity",
};

function readTopology(obj: any): LayerConfig[] {
  const config = obj?.modelTopology?.model_config;
  if (!config || !config.config || !Array.isArray(config.config.layers)) {
    throw new ParseError("checkpoint is missing the layer topology");
  }
  if (config.class_name !== "Sequential") {
    throw new UnsupportedLayerError(
      `only Sequential models convert, got ${config.class_name}`,
    );
  }
  return config.config.layers as LayerConfig[];
}

/** Pull every tensor out of the binary shards, keyed by weight name. */
function readTensors(
  src: string,
  groups: ManifestGroup[],
): Map<string, { shape: number[]; values: Float32Array }> {
  const dir = dirname(src);
  const tensors = new Map<string, { shape: number[]; values: Float32Array }>();
  for (const group of groups) {
    const buffers = group.paths.map((p) => {
      try {
        return readFileSync(join(dir, p));
      } catch {
        throw new ParseError(`missing weight shard ${p}`);
      }
    });
    const blob = Buffer.concat(buffers);
    let offset = 0;
    for (const spec of group.weights) {
      if (spec.dtype !== "float32") {
        throw new ParseError(`unsupported dtype ${spec.dtype} for ${spec.name}`);
      }
      const count = spec.shape.reduce((a, b) => a * b, 1);
      const bytes = count * 4;
      if (offset + bytes > blob.length) {
        throw new ParseError(`weight shard truncated at ${spec.name}`);
      }
      const values = new Float32Array(count);
      for (let i = 0; i < count; i++) {
        values[i] = blob.readFloatLE(offset + i * 4);
      }
      tensors.set(spec.name, { shape: spec.shape, values });
      offset += bytes;
    }
  }
  return tensors;
}

function denseToJsonLayer(
  layer: LayerConfig,
  tensors: Map<string, { shape: number[]; values: Float32Array }>,
  isLast: boolean,
): JsonLayer {
  const name = layer.config.name;
  const kernel = tensors.get(`${name}/kernel`);
  const bias = tensors.get(`${name}/bias`);
  if (!kernel || !bias) {
    throw new ParseError(`missing kernel/bias tensors for layer ${name}`);
  }
  const [fanIn, fanOut] = kernel.shape;
  if (kernel.shape.length !== 2 || bias.shape[0] !== fanOut) {
    throw new ShapeError(`layer ${name}: inconsistent tensor shapes`);
  }
  const activation = ACTIVATION_MAP[layer.config.activation ?? "linear"];
  if (activation === undefined) {
    throw new UnsupportedLayerError(
      `layer ${name}: activation ${layer.config.activation} not supported`,
    );
  }
  if (!isLast && activation !== "relu") {
    throw new UnsupportedLayerError(
      `layer ${name}: hidden layers must use relu`,
    );
  }
  // transpose [in, out] -> row-major [out, in]
  const weight: number[][] = [];
  for (let o = 0; o < fanOut; o++) {
    const row = new Array<number>(fanIn);
    for (let i = 0; i < fanIn; i++) {
      row[i] = kernel.values[i * fanOut + o];
    }
    weight.push(row);
  }
  return {
    weight,
    bias: Array.from(bias.values),
    activation: isLast ? "identity" : "relu",
  };
}

export function convertCheckpoint(src: string, dst: string): ConversionManifest {
  let obj: any;
  try {
    obj = JSON.parse(readFileSync(src, "utf8"));
  } catch (err) {
    throw new ParseError(`${src}: ${(err as Error).message}`);
  }
  const topology = readTopology(obj);
  if (!Array.isArray(obj.weightsManifest)) {
    throw new ParseError("checkpoint is missing weightsManifest");
  }
  const tensors = readTensors(src, obj.weightsManifest as ManifestGroup[]);

  const dense = topology.filter((l) => l.class_name !== "InputLayer");
  for (const layer of dense) {
    if (layer.class_name !== "Dense") {
      throw new UnsupportedLayerError(
        `layer type ${layer.class_name} not supported`,
      );
    }
  }
  if (dense.length === 0) {
    throw new ParseError("checkpoint contains no dense layers");
  }
  const layers = dense.map((l, k) =>
    denseToJsonLayer(l, tensors, k === dense.length - 1),
  );
  const net: JsonNetwork = {
    input_dim: layers[0].weight[0].length,
    layers,
  };
  return writeNetwork(net, src, dst);
}
