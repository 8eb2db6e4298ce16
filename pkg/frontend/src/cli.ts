#!/usr/bin/env node
/** Command-line entry point.
 *
 *   convert --from checkpoint --in model.json --out net.json
 *   convert --from acas-text  --in net.nnet   --out net.json
 *
 * Prints the conversion manifest (source, layer sequence, output path,
 * sha256 of the emitted JSON) on success. Exit codes: 0 success,
 * 1 conversion error, 2 usage error.
 */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { convertAcasText } from "./acas.js";
import { convertCheckpoint } from "./checkpoint.js";
import { ConversionError } from "./errors.js";

export async function main(argv: string[]): Promise<number> {
  const parser = yargs(argv)
    .scriptName("netformat-convert")
    .command("convert", "convert a source model into the JSON network format", {
      from: {
        choices: ["checkpoint", "acas-text"] as const,
        demandOption: true,
        describe: "source format",
      },
      in: {
        type: "string",
        demandOption: true,
        describe: "source file (model.json or .nnet text)",
      },
      out: {
        type: "string",
        demandOption: true,
        describe: "destination JSON network file",
      },
    })
    .demandCommand(1)
    .strict()
    .fail((msg) => {
      throw new UsageError(msg);
    })
    .exitProcess(false);

  let args;
  try {
    args = await parser.parse();
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`usage error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  try {
    const convert =
      args.from === "checkpoint" ? convertCheckpoint : convertAcasText;
    const manifest = convert(args.in as string, args.out as string);
    console.log(JSON.stringify(manifest, null, 2));
    return 0;
  } catch (err) {
    if (err instanceof ConversionError) {
      console.error(`${err.name}: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

class UsageError extends Error {}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() as string);

if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
