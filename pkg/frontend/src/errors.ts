/** Conversion failure categories. */

export class ConversionError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** A layer type the target format cannot represent (conv, norm, ...). */
export class UnsupportedLayerError extends ConversionError {}

/** Structurally broken or truncated source file. */
export class ParseError extends ConversionError {}

/** Weight/bias dimensions that do not chain into a valid network. */
export class ShapeError extends ConversionError {}
