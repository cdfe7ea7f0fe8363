from __future__ import annotations

import logging
from datetime import datetime, timezone
from decimal import Decimal
from typing import List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from src import __version__
from src.config.settings import settings
from src.loader.file_loader import FileLoader
from src.pipeline.processor import MappingSetProcessor, TimingBreakdown
from src.schema.curie import Curie
from src.schema.diagnostic import Diagnostic, RuleConfig
from src.schema.enums import CardinalityPolicy, ExportFormat, ParseMode, PredicateTier
from src.schema.errors import SSSOMError
from src.transforms.export import to_json, to_ntriples
from src.tsv.writer import serialize_canonical
from src.walker.graph import build_graph, neighbors, render_path


logging.basicConfig(level=settings.LOG_LEVEL, format=settings.LOG_FORMAT)
logger = logging.getLogger(__name__)

app = FastAPI(
    title="SSSOM Mapping Toolkit API",
    description="Validate, convert and walk SSSOM mapping sets",
    version=__version__,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


class ValidateRequest(BaseModel):
    content: str
    mode: ParseMode = ParseMode.lenient
    cardinality: Optional[CardinalityPolicy] = None


class ValidateResponse(BaseModel):
    valid: bool
    diagnostics: List[Diagnostic]
    timing: TimingBreakdown


class ConvertRequest(BaseModel):
    content: str
    to: ExportFormat = ExportFormat.tsv
    emit_direct: bool = False
    mode: ParseMode = ParseMode.lenient


class ConvertResponse(BaseModel):
    content: str


class WalkRequest(BaseModel):
    content: str
    start: str
    max_distance: int = Field(default=2, ge=1)
    tiers: Optional[List[PredicateTier]] = None
    min_confidence: Optional[Decimal] = None


class WalkResultOut(BaseModel):
    target: str
    tier: PredicateTier
    distance: int
    confidence: str
    path: str


def _processor(mode: ParseMode, cardinality: Optional[CardinalityPolicy] = None) -> MappingSetProcessor:
    return MappingSetProcessor(FileLoader(), RuleConfig(mode=mode, cardinality=cardinality))


@app.post("/validate", response_model=ValidateResponse)
async def validate_endpoint(request: ValidateRequest) -> ValidateResponse:
    """Parse and validate an embedded-mode document; parse failures are HTTP 400."""
    try:
        outcome = _processor(request.mode, request.cardinality).process_bytes(
            request.content.encode("utf-8"), source="request"
        )
    except SSSOMError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.exception(f"Error validating mapping set: {e}")
        raise HTTPException(status_code=500, detail=f"Failed to validate mapping set: {str(e)}")
    return ValidateResponse(valid=outcome.valid, diagnostics=outcome.diagnostics, timing=outcome.timing)


@app.post("/convert", response_model=ConvertResponse)
async def convert_endpoint(request: ConvertRequest) -> ConvertResponse:
    try:
        document = _processor(request.mode).parse(request.content.encode("utf-8"))
        if request.to == ExportFormat.json:
            data = to_json(document.mapping_set)
        elif request.to == ExportFormat.ntriples:
            data = to_ntriples(document.mapping_set, emit_direct=request.emit_direct)
        else:
            data = serialize_canonical(document.mapping_set)
    except SSSOMError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.exception(f"Error converting mapping set: {e}")
        raise HTTPException(status_code=500, detail=f"Failed to convert mapping set: {str(e)}")
    return ConvertResponse(content=data.decode("utf-8"))


@app.post("/walk", response_model=List[WalkResultOut])
async def walk_endpoint(request: WalkRequest) -> List[WalkResultOut]:
    if request.max_distance > settings.MAX_WALK_DISTANCE:
        raise HTTPException(
            status_code=400,
            detail=f"max_distance must not exceed {settings.MAX_WALK_DISTANCE}",
        )
    try:
        start = Curie.parse(request.start)
        document = _processor(ParseMode.lenient).parse(request.content.encode("utf-8"))
        graph = build_graph([document.mapping_set])
        tiers = frozenset(request.tiers) if request.tiers else None
        results = neighbors(graph, start, request.max_distance, tiers, request.min_confidence)
    except SSSOMError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.exception(f"Error walking mapping graph: {e}")
        raise HTTPException(status_code=500, detail=f"Failed to walk mapping graph: {str(e)}")

    return [
        WalkResultOut(
            target=str(r.target),
            tier=r.tier,
            distance=r.distance,
            confidence=str(r.confidence),
            path=render_path(start, r),
        )
        for r in results
    ]


@app.get("/health")
async def health():
    """Service status and configuration flags."""
    return {
        "status": "healthy",
        "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
        "version": __version__,
        "configuration": {
            "builtin_prefixes": settings.BUILTIN_PREFIXES_ENABLED,
            "parse_mode": settings.PARSE_MODE,
            "max_walk_distance": settings.MAX_WALK_DISTANCE,
        },
    }


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
