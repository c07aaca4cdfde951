"""Bridge from the `command` predictor to an OpenAI-compatible chat endpoint.

Reads one request from stdin and prints the reply text. Set MODEL_BASE_URL
(default https://api.openai.com/v1), MODEL_NAME, and the key variable named
in the request.
"""
import json
import os
import sys
import urllib.request


def main() -> int:
    req = json.load(sys.stdin)
    key = os.environ[req["api_key_env"]] if req.get("api_key_env") else None
    body = {
        "model": os.environ.get("MODEL_NAME", "gpt-4o-mini"),
        "messages": req["messages"],
        "temperature": req["temperature"],
        "seed": req["seed"],
    }
    for k in ("top_p", "max_tokens"):
        if req.get(k) is not None:
            body[k] = req[k]
    base = os.environ.get("MODEL_BASE_URL", "https://api.openai.com/v1").rstrip("/")
    headers = {"Content-Type": "application/json"}
    if key:
        headers["Authorization"] = f"Bearer {key}"
    http = urllib.request.Request(
        f"{base}/chat/completions", json.dumps(body).encode(), headers
    )
    with urllib.request.urlopen(http) as resp:
        reply = json.load(resp)
    sys.stdout.write(reply["choices"][0]["message"]["content"] or "")
    return 0


if __name__ == "__main__":
    sys.exit(main())
