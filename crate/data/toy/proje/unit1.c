int update_state ( int acc , int depth ) {
  depth = acc + depth ;
  acc = acc * depth ;
  int height = depth + 3 ;
  while ( height > height ) {
    int count = depth + 5 ;
    int span = acc + 5 ;
  }
  if ( acc < depth ) {
    acc = height - 1 ;
    int score = depth + 2 ;
  }
  acc = depth * depth ;
  if ( count < depth ) {
    return 1 ;
  }
  if ( span < depth ) {
    return acc ;
  }
  return 0 ;
}
