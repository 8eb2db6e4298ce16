/** Target JSON network format (the verification engine's on-disk
 * contract) and the conversion manifest.
 *
 * Serialization goes through JSON.stringify, whose number formatting is
 * the shortest decimal string that round-trips to the same 64-bit
 * float — lossless within 17 significant digits by construction.
 */

import { createHash } from "crypto";
import { writeFileSync } from "fs";

import { ShapeError } from "./errors.js";

export type ActivationKind = "relu" | "identity";

export interface JsonLayer {
  weight: number[][]; // row-major, rows = layer output size
  bias: number[];
  activation: ActivationKind;
}

export interface JsonNetwork {
  input_dim: number;
  layers: JsonLayer[];
  metadata?: Record<string, unknown>;
}

export interface ConversionManifest {
  source: string;
  layerSequence: string[];
  output: string;
  sha256: string;
}

/** Enforce the target format's invariants before writing. */
export function validateNetwork(net: JsonNetwork): void {
  if (!Number.isInteger(net.input_dim) || net.input_dim < 1) {
    throw new ShapeError(`invalid input_dim ${net.input_dim}`);
  }
  if (net.layers.length === 0) {
    throw new ShapeError("network needs at least one layer");
  }
  let prev = net.input_dim;
  net.layers.forEach((layer, k) => {
    const rows = layer.weight.length;
    if (rows === 0 || layer.bias.length !== rows) {
      throw new ShapeError(
        `layer ${k}: bias length ${layer.bias.length} != rows ${rows}`,
      );
    }
    for (const row of layer.weight) {
      if (row.length !== prev) {
        throw new ShapeError(
          `layer ${k}: row length ${row.length} != fan-in ${prev}`,
        );
      }
      for (const v of row) {
        if (!Number.isFinite(v)) {
          throw new ShapeError(`layer ${k}: non-finite weight`);
        }
      }
    }
    for (const v of layer.bias) {
      if (!Number.isFinite(v)) {
        throw new ShapeError(`layer ${k}: non-finite bias`);
      }
    }
    const isLast = k === net.layers.length - 1;
    if (!isLast && layer.activation !== "relu") {
      throw new ShapeError(`layer ${k}: hidden layers must use relu`);
    }
    if (isLast && layer.activation !== "identity") {
      throw new ShapeError("output layer must use identity");
    }
    prev = rows;
  });
}

export function serializeNetwork(net: JsonNetwork): string {
  validateNetwork(net);
  return JSON.stringify(net);
}

export function writeNetwork(
  net: JsonNetwork,
  source: string,
  dst: string,
): ConversionManifest {
  const text = serializeNetwork(net);
  writeFileSync(dst, text);
  return {
    source,
    layerSequence: net.layers.map(
      (l) => `dense(${l.weight[0].length}->${l.weight.length}, ${l.activation})`,
    ),
    output: dst,
    sha256: createHash("sha256").update(text).digest("hex"),
  };
}
