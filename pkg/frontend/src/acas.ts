/** ACAS-style plain-text network import.
 *
 * Layout (comma-separated lines, "//" comments allowed anywhere before
 * the data):
 *
 *   numLayers, inputSize, outputSize, maxLayerSize
 *   layer sizes (numLayers + 1 values)
 *   legacy symmetry flag (ignored)
 *   input minimums            (inputSize values)
 *   input maximums            (inputSize values)
 *   normalization means       (inputSize + 1 values, last is output)
 *   normalization ranges      (inputSize + 1 values, last is output)
 *   then per layer: one line per neuron with its incoming weights,
 *   followed by one line per neuron with its bias.
 *
 * The normalization constants are not applied; they are preserved in a
 * metadata block so downstream tooling can normalize inputs itself.
 */

import { readFileSync } from "fs";

import { ParseError } from "./errors.js";
import {
  ConversionManifest,
  JsonLayer,
  JsonNetwork,
  writeNetwork,
} from "./format.js";

class LineReader {
  private lines: string[];
  private pos = 0;

  constructor(text: string) {
    this.lines = text
      .split(/\r?\n/)
      .map((l) => l.trim())
      .filter((l) => l.length > 0 && !l.startsWith("//"));
  }

  next(context: string): string {
    if (this.pos >= this.lines.length) {
      throw new ParseError(`file truncated while reading ${context}`);
    }
    return this.lines[this.pos++];
  }

  numbers(context: string, expected?: number): number[] {
    const parts = this.next(context)
      .split(",")
      .map((p) => p.trim())
      .filter((p) => p.length > 0);
    const values = parts.map((p) => {
      const v = Number(p);
      if (!Number.isFinite(v)) {
        throw new ParseError(`non-numeric value '${p}' in ${context}`);
      }
      return v;
    });
    if (expected !== undefined && values.length !== expected) {
      throw new ParseError(
        `${context}: expected ${expected} values, got ${values.length}`,
      );
    }
    return values;
  }
}

export function convertAcasText(src: string, dst: string): ConversionManifest {
  let text: string;
  try {
    text = readFileSync(src, "utf8");
  } catch (err) {
    throw new ParseError(`${src}: ${(err as Error).message}`);
  }
  const reader = new LineReader(text);

  const header = reader.numbers("header", 4);
  const [numLayers, inputSize, outputSize] = header.map((v) => Math.trunc(v));
  if (numLayers < 1 || inputSize < 1 || outputSize < 1) {
    throw new ParseError(`invalid header ${header}`);
  }
  const sizes = reader
    .numbers("layer sizes", numLayers + 1)
    .map((v) => Math.trunc(v));
  if (sizes[0] !== inputSize || sizes[numLayers] !== outputSize) {
    throw new ParseError(
      `layer sizes ${sizes} disagree with header ${inputSize}->${outputSize}`,
    );
  }
  reader.next("symmetry flag");
  const inputMin = reader.numbers("input minimums", inputSize);
  const inputMax = reader.numbers("input maximums", inputSize);
  const means = reader.numbers("normalization means", inputSize + 1);
  const ranges = reader.numbers("normalization ranges", inputSize + 1);

  const layers: JsonLayer[] = [];
  for (let k = 0; k < numLayers; k++) {
    const weight: number[][] = [];
    for (let i = 0; i < sizes[k + 1]; i++) {
      weight.push(reader.numbers(`layer ${k} weights row ${i}`, sizes[k]));
    }
    const bias: number[] = [];
    for (let i = 0; i < sizes[k + 1]; i++) {
      bias.push(reader.numbers(`layer ${k} bias ${i}`, 1)[0]);
    }
    layers.push({
      weight,
      bias,
      activation: k === numLayers - 1 ? "identity" : "relu",
    });
  }

  const net: JsonNetwork = {
    input_dim: inputSize,
    layers,
    metadata: {
      normalization: {
        input_min: inputMin,
        input_max: inputMax,
        mean: means,
        range: ranges,
      },
    },
  };
  return writeNetwork(net, src, dst);
}
